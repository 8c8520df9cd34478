//! Fixing an entry of a locally conformal Nambu–Poisson bracket.

use multivector::{Form, MultiVector};
use scalar_expr::Expr;
use structures::Kind;

use crate::atlas::{AtlasError, AtlasOptions, Chart, ConformalAtlas};
use crate::glue::GlobalPair;

/// Fixers for an atlas contraction.
#[derive(Debug, Clone, PartialEq)]
pub enum Fixer {
    /// A global function `F`, localized as `F_α = e^{−σ_α}F`.
    Global(Expr),
    /// One local function per chart, in chart order.
    Local(Vec<Expr>),
}

impl ConformalAtlas {
    fn local_fixers(&self, fixer: &Fixer, opts: &AtlasOptions) -> Result<Vec<Expr>, AtlasError> {
        match fixer {
            Fixer::Global(f) => Ok(self.charts().iter().map(|c| f.mul(&c.sigma.neg().exp())).collect()),
            Fixer::Local(fs) => {
                if fs.len() != self.charts().len() {
                    return Err(AtlasError::FixerCount { expected: self.charts().len(), got: fs.len() });
                }
                for (i, j, b) in self.overlaps() {
                    let (a, c) = (&self.charts()[i], &self.charts()[j]);
                    let lhs = fs[i].mul(&a.sigma.exp());
                    let rhs = fs[j].mul(&c.sigma.exp());
                    let v = scalar_expr::equal_probabilistic(&lhs, &rhs, &opts.boxed(&b, opts.overlap_samples))?;
                    if let Some(p) = v.witness() {
                        return Err(AtlasError::FixerMismatch {
                            a: a.name.clone(),
                            b: c.name.clone(),
                            point: p.to_vec(),
                            residual: v.max_residual(),
                        });
                    }
                }
                Ok(fs.clone())
            }
        }
    }

    /// Contract every chart, `η_α ↦ ι_{dF_α} η_α`, keeping the potentials.
    /// A Nambu–Poisson atlas of order `k` becomes one of order `k − 1`
    /// (Poisson for `k = 3`).
    pub fn contract(&self, fixer: &Fixer, opts: &AtlasOptions) -> Result<ConformalAtlas, AtlasError> {
        let k = match self.kind() {
            Kind::NambuPoisson(k) if k >= 3 => k,
            other => return Err(AtlasError::Kind(other)),
        };
        let fs = self.local_fixers(fixer, opts)?;
        let charts = self
            .charts()
            .iter()
            .zip(&fs)
            .map(|(c, f)| {
                let df = Form::differential(self.dim(), f);
                Chart::new(c.name.clone(), c.bounds.clone(), c.tensor.contract(&df), c.sigma.clone())
            })
            .collect();
        let kind = if k == 3 { Kind::Poisson } else { Kind::NambuPoisson(k - 1) };
        ConformalAtlas::new(self.coords().to_vec(), kind, charts)
    }
}

/// Global pair of the contracted atlas in terms of the original one:
/// `(ι_{dF}η + (−1)^{k−1} F 𝓔, ι_{dF}𝓔)`, equivalently
/// `(ι_{d_θF}η, (−1)^k ι_{d_θF∧θ}η)`.
pub fn contracted_pair(gp: &GlobalPair, f: &Expr) -> (MultiVector, MultiVector) {
    let k = gp.order();
    let df = Form::differential(gp.eta.dim(), f);
    let f_e = gp.companion.scale(f);
    let eta = gp.eta.contract(&df).add(&if k % 2 == 1 { f_e } else { f_e.neg() });
    (eta, gp.companion.contract(&df))
}

/// Literal form `(ι_{dF}η + (−1)^{k−1} F 𝓔, (−1)^k ι_{dF}𝓔)`.
///
/// Its companion has the wrong sign for odd `k`; kept for comparison.
pub fn contracted_pair_literal(gp: &GlobalPair, f: &Expr) -> (MultiVector, MultiVector) {
    let (eta, e) = contracted_pair(gp, f);
    let e = if gp.order() % 2 == 0 { e } else { e.neg() };
    (eta, e)
}

/// Twisted form `(ι_{d_θF}η, −ι_{d_θF∧θ}η)` with `d_θF = dF − Fθ`.
///
/// Its companion is correct for odd `k` only; kept for comparison.
pub fn contracted_pair_twisted(gp: &GlobalPair, f: &Expr) -> (MultiVector, MultiVector) {
    let dtf = Form::ldr_function(f, &gp.theta);
    let eta = gp.eta.contract(&dtf);
    let e = gp.eta.contract(&dtf.wedge(&gp.theta)).neg();
    (eta, e)
}
