//! Defining identities of every structure kind.

use scalar_expr::{check_zero, Expr, SampleBox};

use crate::bracket::{fundamental_identity_residual, make_bracket};
use crate::candidate::{Candidate, Kind, StructureError};
use crate::cascade::{cascade_contract, jacobi_identities, JacobiPair};
use crate::family::FunctionFamily;
use crate::report::VerificationReport;

/// Budgets for identities quantified over test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Fixer tuples used for contraction/cascade checks.
    pub contraction_tuples: usize,
    /// Function tuples used for the sampled fundamental identity.
    pub fundamental_tuples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { contraction_tuples: 40, fundamental_tuples: 6 }
    }
}

fn labels(fs: &[Expr], coords: Option<&[String]>) -> Vec<String> {
    fs.iter()
        .map(|f| match coords {
            Some(c) => f.to_text(c),
            None => f.to_string(),
        })
        .collect()
}

/// Verify with default budgets.
pub fn verify(c: &Candidate, fam: &FunctionFamily, bx: &SampleBox) -> Result<VerificationReport, StructureError> {
    verify_with(c, fam, bx, VerifyOptions::default(), None)
}

/// Verify every defining identity of `c.kind()`.
///
/// A failing identity is definitive and carries a witness. A passing one is
/// probabilistic: it holds at every sample of `bx` for every tested member
/// of `fam`.
pub fn verify_with(
    c: &Candidate,
    fam: &FunctionFamily,
    bx: &SampleBox,
    opts: VerifyOptions,
    coords: Option<&[String]>,
) -> Result<VerificationReport, StructureError> {
    let eta = c.eta();
    let mut r = VerificationReport::new();
    match c.kind() {
        Kind::Poisson | Kind::NambuPoisson(2) | Kind::GeneralizedPoisson(2) => {
            r.record("poisson_condition", &eta.sn_bracket(eta).check_zero(bx)?, vec![]);
        }
        Kind::Jacobi | Kind::NambuJacobi(2) | Kind::GeneralizedJacobi(2) => {
            let p = JacobiPair { lambda: eta.clone(), z: c.companion_or_zero() };
            r.extend_prefixed("", jacobi_identities(&p, bx)?);
        }
        Kind::NambuPoisson(k) => {
            for fixers in fam.tuples(k - 2, opts.contraction_tuples, 1) {
                let l = cascade_contract(eta, None, &fixers)?.lambda;
                r.record("np_contraction_poisson", &l.sn_bracket(&l).check_zero(bx)?, labels(&fixers, coords));
            }
            fundamental(c, fam, bx, opts, coords, &mut r)?;
        }
        Kind::NambuJacobi(k) => {
            let e = c.companion_or_zero();
            for fixers in fam.tuples(k - 2, opts.contraction_tuples, 1) {
                let p = cascade_contract(eta, Some(&e), &fixers)?;
                let inputs = labels(&fixers, coords);
                for (name, res) in jacobi_identities(&p, bx)?.identities {
                    let mut res = res;
                    if let Some(w) = res.witness.as_mut() {
                        w.inputs = inputs.clone();
                    }
                    r.insert(format!("nj_cascade_{name}"), res);
                }
            }
            fundamental(c, fam, bx, opts, coords, &mut r)?;
        }
        Kind::GeneralizedPoisson(_) => {
            r.record("gp_condition", &eta.sn_bracket(eta).check_zero(bx)?, vec![]);
        }
        Kind::GeneralizedJacobi(k) => {
            let e = c.companion_or_zero();
            let w = 2 * (k as i64 - 1);
            let lhs = eta.sn_bracket(eta).add(&e.wedge(eta).scale_int(w));
            r.record("gj_eta", &lhs.check_zero(bx)?, vec![]);
            r.record("gj_companion", &eta.sn_bracket(&e).check_zero(bx)?, vec![]);
        }
    }
    Ok(r)
}

fn fundamental(
    c: &Candidate,
    fam: &FunctionFamily,
    bx: &SampleBox,
    opts: VerifyOptions,
    coords: Option<&[String]>,
    r: &mut VerificationReport,
) -> Result<(), StructureError> {
    let b = make_bracket(c);
    let k = c.arity();
    for fs in fam.draws(2 * k - 1, opts.fundamental_tuples, 2) {
        let res = fundamental_identity_residual(&b, &fs)?;
        r.record("fundamental_identity", &check_zero(&[res], bx)?, labels(&fs, coords));
    }
    Ok(())
}
