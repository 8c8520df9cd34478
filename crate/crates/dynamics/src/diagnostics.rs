//! Dynamical laws checked along trajectories and as symbolic identities.

use std::collections::BTreeMap;

use multivector::{Form, MultiVector};
use scalar_expr::{check_zero, Expr, SampleBox, Verdict};
use serde::Serialize;
use structures::{make_bracket, nj_jacobi_pairs, Kind};

use crate::integrate::{Field, Trajectory};
use crate::system::{field_of, DynamicsError, HamiltonianSystem};

/// Families of laws; each expands to one or more named report entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// Rate of change of each Hamiltonian, drift for conservative kinds.
    Energy,
    /// Product rule for the time derivative of a bracket.
    BracketConservation,
    /// `[X_F, X_H] + X_{F,H}` for binary brackets, involutivity for Nambu.
    Homomorphism,
    /// `ℒ_X η = 0`, or the two mutual-consistency laws of a Nambu–Jacobi pair.
    Preservation,
    /// Agreement of the bi-Hamiltonian forms of a ternary flow.
    FlowAgreement,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::Energy => "energy",
            Law::BracketConservation => "bracket_conservation",
            Law::Homomorphism => "homomorphism",
            Law::Preservation => "preservation",
            Law::FlowAgreement => "flow_agreement",
        }
    }

    fn applies(self, kind: Kind) -> bool {
        match self {
            Law::Energy => true,
            Law::BracketConservation => !kind.has_companion(),
            Law::Homomorphism => kind.arity() == 2 || matches!(kind, Kind::NambuPoisson(_)),
            Law::Preservation => matches!(kind, Kind::Poisson | Kind::Jacobi | Kind::NambuPoisson(_) | Kind::NambuJacobi(_)),
            Law::FlowAgreement => matches!(kind, Kind::NambuPoisson(3) | Kind::NambuJacobi(3)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsOptions {
    /// Laws to run; `None` runs every applicable law whose inputs are present.
    pub laws: Option<Vec<Law>>,
    /// `F₁,…,F_k` for the bracket conservation law.
    pub bracket_tuple: Option<Vec<Expr>>,
    /// `F₁,…,F_{k−1}` paired with the Hamiltonians in the homomorphism law.
    pub partners: Option<Vec<Expr>>,
    /// Box for symbolic identities; defaults to the system box or `[−1,1]ⁿ`.
    pub sample: Option<SampleBox>,
    /// Tolerance on rates of conserved quantities.
    pub rate_tol: f64,
    /// Tolerance on the dissipation rate of Jacobi-type kinds.
    pub dissipation_tol: f64,
    /// Tolerance on relative drift of conserved Hamiltonians.
    pub drift_tol: f64,
    /// Tolerance on pointwise agreement of bi-Hamiltonian flows.
    pub flow_tol: f64,
    /// Number of trajectory states used for pointwise flow agreement.
    pub flow_states: usize,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions {
            laws: None,
            bracket_tuple: None,
            partners: None,
            sample: None,
            rate_tol: 1e-6,
            dissipation_tol: 1e-5,
            drift_tol: 1e-6,
            flow_tol: 1e-10,
            flow_states: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResult {
    pub pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Trajectory index of the worst residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_index: Option<usize>,
    /// Sample point of a failed symbolic identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl LawResult {
    fn along(residuals: &[(usize, f64)], tolerance: f64) -> Self {
        let mut worst_index = None;
        let mut max_residual = 0.0;
        for &(j, r) in residuals {
            if worst_index.is_none() || r > max_residual || r.is_nan() {
                worst_index = Some(j);
                max_residual = r;
            }
        }
        LawResult { pass: max_residual <= tolerance, max_residual, tolerance, worst_index, witness: None }
    }

    fn symbolic(v: &Verdict, tolerance: f64) -> Self {
        LawResult {
            pass: v.is_equal(),
            max_residual: v.max_residual(),
            tolerance,
            worst_index: None,
            witness: v.witness().map(<[f64]>::to_vec),
        }
    }
}

/// Law name → outcome, serialized as a JSON object in name order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiagnosticsReport {
    pub laws: BTreeMap<String, LawResult>,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.laws.values().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&LawResult> {
        self.laws.get(name)
    }

    fn add(&mut self, name: impl Into<String>, r: LawResult) {
        self.laws.insert(name.into(), r);
    }
}

struct Ctx<'a> {
    sys: &'a HamiltonianSystem,
    traj: &'a Trajectory,
    bx: SampleBox,
    opts: &'a DiagnosticsOptions,
}

fn eval_at(e: &Expr, p: &[f64], step: usize) -> Result<f64, DynamicsError> {
    e.eval(p).map_err(|source| DynamicsError::Eval { step, source })
}

impl Ctx<'_> {
    /// Centered difference of `g` along the trajectory against `rate`,
    /// at interior grid points.
    fn rate_residuals(&self, g: &Expr, rate: &Expr) -> Result<Vec<(usize, f64)>, DynamicsError> {
        let s = &self.traj.states;
        let mut out = Vec::new();
        for i in 1..s.len().saturating_sub(1) {
            let fd = (eval_at(g, &s[i + 1], i + 1)? - eval_at(g, &s[i - 1], i - 1)?) / (2.0 * self.traj.step);
            out.push((i, (fd - eval_at(rate, &s[i], i)?).abs()));
        }
        Ok(out)
    }

    fn symbolic(&self, x: &MultiVector) -> Result<LawResult, DynamicsError> {
        let v = x.check_zero(&self.bx).map_err(structures::StructureError::from)?;
        Ok(LawResult::symbolic(&v, self.bx.tol))
    }

    fn symbolic_scalar(&self, e: Expr) -> Result<LawResult, DynamicsError> {
        let v = check_zero(&[e], &self.bx).map_err(structures::StructureError::from)?;
        Ok(LawResult::symbolic(&v, self.bx.tol))
    }

    fn energy(&self, r: &mut DiagnosticsReport) -> Result<(), DynamicsError> {
        let x = self.sys.vector_field();
        let e_part = self.sys.companion_part();
        let conservative = !self.sys.kind().has_companion();
        for (i, h) in self.sys.hamiltonians().iter().enumerate() {
            let tag = format!("H{}", i + 1);
            let expected = e_part.derivative_of(h);
            let tol = if conservative { self.opts.rate_tol } else { self.opts.dissipation_tol };
            r.add(format!("energy_rate.{tag}"), LawResult::along(&self.rate_residuals(h, &expected)?, tol));
            r.add(format!("energy_identity.{tag}"), self.symbolic_scalar(x.derivative_of(h).sub(&expected))?);
            if conservative {
                let s = &self.traj.states;
                let h0 = eval_at(h, &s[0], 0)?;
                let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
                let mut drift = Vec::with_capacity(s.len());
                for (j, p) in s.iter().enumerate() {
                    drift.push((j, (eval_at(h, p, j)? - h0).abs() / scale));
                }
                r.add(format!("drift.{tag}"), LawResult::along(&drift, self.opts.drift_tol));
            }
        }
        Ok(())
    }

    fn bracket_conservation(&self, fs: &[Expr], r: &mut DiagnosticsReport) -> Result<(), DynamicsError> {
        let b = make_bracket(self.sys.candidate());
        let x = self.sys.vector_field();
        let value = b.eval(fs)?;
        let mut rate = Expr::zero();
        for i in 0..fs.len() {
            let mut args = fs.to_vec();
            args[i] = x.derivative_of(&fs[i]);
            rate = rate.add(&b.eval(&args)?);
        }
        r.add("bracket_conservation", LawResult::along(&self.rate_residuals(&value, &rate)?, self.opts.rate_tol));
        Ok(())
    }

    fn homomorphism(&self, fs: &[Expr], r: &mut DiagnosticsReport) -> Result<(), DynamicsError> {
        let c = self.sys.candidate();
        let (eta, e) = (c.eta(), c.companion());
        let hs = self.sys.hamiltonians();
        let xh = field_of(eta, e, hs);
        let xf = field_of(eta, e, fs);
        let b = make_bracket(c);
        if c.arity() == 2 {
            let fh = b.eval(&[fs[0].clone(), hs[0].clone()])?;
            let res = xf.sn_bracket(&xh).add(&field_of(eta, e, &[fh]));
            r.add("homomorphism", self.symbolic(&res)?);
        } else {
            let k = c.arity();
            let mut rhs = MultiVector::zero(c.dim(), 1);
            for i in 0..fs.len() {
                let mut args = hs.to_vec();
                args.push(fs[i].clone());
                let mut g = fs.to_vec();
                g[i] = b.eval(&args)?;
                rhs = rhs.add(&field_of(eta, e, &g));
            }
            let rhs = if k % 2 == 0 { rhs.neg() } else { rhs };
            r.add("involutivity", self.symbolic(&xh.sn_bracket(&xf).sub(&rhs))?);
        }
        Ok(())
    }

    fn preservation(&self, r: &mut DiagnosticsReport) -> Result<(), DynamicsError> {
        let c = self.sys.candidate();
        let eta = c.eta();
        let hs = self.sys.hamiltonians();
        match c.companion() {
            None => r.add("eta_preservation", self.symbolic(&eta.lie_derivative(&self.sys.vector_field()))?),
            Some(e) => {
                let k = c.arity();
                let n = c.dim();
                let forms: Vec<Form> = hs.iter().map(|h| Form::differential(n, h)).collect();
                let x_e = e.contract_all(&forms[..k - 2]);
                r.add("nj_consistency_eta", self.symbolic(&eta.lie_derivative(&x_e))?);
                let x_eta = self.sys.eta_part();
                let g = e.apply(&forms);
                let target = eta.contract(&Form::differential(n, &g));
                let target = if k % 2 == 0 { target.neg() } else { target };
                r.add("nj_consistency_companion", self.symbolic(&e.lie_derivative(&x_eta).sub(&target))?);
            }
        }
        Ok(())
    }

    fn flow_agreement(&self, r: &mut DiagnosticsReport) -> Result<(), DynamicsError> {
        let c = self.sys.candidate();
        let hs = self.sys.hamiltonians();
        let zero = MultiVector::zero(c.dim(), 2);
        let (p1, p2) = nj_jacobi_pairs(c.eta(), c.companion().unwrap_or(&zero), &hs[0], &hs[1]);
        let x = self.sys.vector_field();
        let via2 = field_of(&p2.lambda, Some(&p2.z), &hs[..1]);
        let via1 = field_of(&p1.lambda, Some(&p1.z), &hs[1..]);
        let sym = self.symbolic(&x.sub(&via2))?;
        let sym2 = self.symbolic(&x.sub(&via1))?;
        r.add("bi_hamiltonian_identity", LawResult {
            pass: sym.pass && sym2.pass,
            max_residual: sym.max_residual.max(sym2.max_residual),
            witness: sym.witness.or(sym2.witness),
            ..sym
        });
        let (f0, f1, f2) = (Field::new(&x), Field::new(&via2), Field::new(&via1));
        let s = &self.traj.states;
        let count = self.opts.flow_states.min(s.len()).max(1);
        let mut res = Vec::with_capacity(count);
        for j in 0..count {
            let i = if count == 1 { 0 } else { j * (s.len() - 1) / (count - 1) };
            let err = |source| DynamicsError::Eval { step: i, source };
            let (a, b, d) = (f0.eval(&s[i]).map_err(err)?, f1.eval(&s[i]).map_err(err)?, f2.eval(&s[i]).map_err(err)?);
            let worst = (0..a.len()).map(|m| (a[m] - b[m]).abs().max((a[m] - d[m]).abs())).fold(0.0, f64::max);
            res.push((i, worst));
        }
        r.add("bi_hamiltonian_flow", LawResult::along(&res, self.opts.flow_tol));
        Ok(())
    }
}

/// Run the requested diagnostics of `sys` along `traj`.
///
/// Report names: `energy_rate.Hi`, `energy_identity.Hi`, `drift.Hi`,
/// `bracket_conservation`, `homomorphism` or `involutivity`,
/// `eta_preservation` or `nj_consistency_eta`/`nj_consistency_companion`,
/// `bi_hamiltonian_identity`, `bi_hamiltonian_flow`.
pub fn run_diagnostics(
    sys: &HamiltonianSystem,
    traj: &Trajectory,
    opts: &DiagnosticsOptions,
) -> Result<DiagnosticsReport, DynamicsError> {
    let kind = sys.kind();
    let k = kind.arity();
    let tuple = opts.bracket_tuple.as_ref().filter(|t| t.len() == k);
    let partners = opts.partners.as_ref().filter(|p| p.len() == k - 1);
    let laws: Vec<Law> = match &opts.laws {
        Some(list) => {
            for &law in list {
                if !law.applies(kind) {
                    return Err(DynamicsError::NotApplicable { law: law.name(), kind });
                }
                let missing = match law {
                    Law::BracketConservation => tuple.is_none(),
                    Law::Homomorphism => partners.is_none(),
                    _ => false,
                };
                if missing {
                    return Err(DynamicsError::MissingAuxiliary(law.name()));
                }
            }
            list.clone()
        }
        None => [Law::Energy, Law::BracketConservation, Law::Homomorphism, Law::Preservation, Law::FlowAgreement]
            .into_iter()
            .filter(|l| l.applies(kind))
            .filter(|l| match l {
                Law::BracketConservation => tuple.is_some(),
                Law::Homomorphism => partners.is_some(),
                _ => true,
            })
            .collect(),
    };
    let bx = match (&opts.sample, sys.bounds()) {
        (Some(b), _) => b.clone(),
        (None, Some(b)) => SampleBox::from_bounds(b).map_err(structures::StructureError::from)?,
        (None, None) => SampleBox::unit(sys.dim()),
    };
    let ctx = Ctx { sys, traj, bx, opts };
    let mut r = DiagnosticsReport::default();
    for law in laws {
        match law {
            Law::Energy => ctx.energy(&mut r)?,
            Law::BracketConservation => ctx.bracket_conservation(tuple.unwrap(), &mut r)?,
            Law::Homomorphism => ctx.homomorphism(partners.unwrap(), &mut r)?,
            Law::Preservation => ctx.preservation(&mut r)?,
            Law::FlowAgreement => ctx.flow_agreement(&mut r)?,
        }
    }
    Ok(r)
}
