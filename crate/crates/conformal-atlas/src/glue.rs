//! Gluing rescaled local tensors into a global Jacobi-type pair.

use multivector::{Form, MultiVector};
use scalar_expr::{check_zero, Expr, SampleBox};
use structures::{verify_with, Bracket, Candidate, Kind, VerificationReport};

use crate::atlas::{AtlasError, AtlasOptions, ConformalAtlas};

/// Rescaled tensor and Lee form as computed on one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub chart: String,
    pub bounds: Vec<[f64; 2]>,
    pub eta: MultiVector,
    pub theta: Form,
}

/// Global tensor `η`, Lee form `θ` and companion `𝓔 = (−1)^k ι_θ η`.
///
/// The global expressions are those of the first chart. Rescaled tensors
/// of overlapping charts agree on an open set, so as analytic expressions
/// they agree on every chart connected to the first one; `pieces` keeps the
/// per-chart forms for the chart-independence check.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalPair {
    pub kind: Kind,
    pub eta: MultiVector,
    pub theta: Form,
    pub companion: MultiVector,
    pub pieces: Vec<Piece>,
}

/// `(−1)^k ι_θ η` for an order-`k` tensor.
pub fn companion_of(eta: &MultiVector, theta: &Form) -> MultiVector {
    let c = eta.contract(theta);
    if eta.order() % 2 == 0 {
        c
    } else {
        c.neg()
    }
}

impl ConformalAtlas {
    /// Validate, then glue.
    pub fn glue(&self, opts: &AtlasOptions) -> Result<GlobalPair, AtlasError> {
        let report = self.validate(opts)?;
        if !report.passed() {
            return Err(AtlasError::Invalid(Box::new(report)));
        }
        self.glue_unchecked()
    }

    /// Glue without validating; the atlas must still be connected.
    pub fn glue_unchecked(&self) -> Result<GlobalPair, AtlasError> {
        self.check_connected()?;
        let w = self.weight();
        let pieces: Vec<Piece> = self
            .charts()
            .iter()
            .map(|c| Piece { chart: c.name.clone(), bounds: c.bounds.clone(), eta: c.rescaled(w), theta: c.lee_form() })
            .collect();
        let eta = pieces[0].eta.clone();
        let theta = pieces[0].theta.clone();
        let companion = companion_of(&eta, &theta);
        Ok(GlobalPair { kind: self.kind().with_companion(), eta, theta, companion, pieces })
    }

    /// Local-global consistency `e^{σ_α}{F¹_α,…}_α ≡ {F¹,…}` with
    /// `F_α = e^{−σ_α}F`, on every chart box. Names `local_global.<chart>`.
    pub fn check_local_global(
        &self,
        gp: &GlobalPair,
        fs: &[Expr],
        opts: &AtlasOptions,
    ) -> Result<VerificationReport, AtlasError> {
        let global = gp.bracket().eval(fs)?;
        let mut r = VerificationReport::new();
        for c in self.charts() {
            let damp = c.sigma.neg().exp();
            let local: Vec<Expr> = fs.iter().map(|f| f.mul(&damp)).collect();
            let value = Bracket::new(c.tensor.clone(), None).eval(&local)?.mul(&c.sigma.exp());
            let v = check_zero(&[value.sub(&global)], &c.sample_box(opts))?;
            let inputs = fs.iter().map(|f| f.to_text(self.coords())).collect();
            r.record(format!("local_global.{}", c.name), &v, inputs);
        }
        Ok(r)
    }

    /// Residual of the per-chart rescaled tensors against each other on
    /// overlaps. Names `chart_independence.<a>.<b>`.
    pub fn chart_independence(&self, gp: &GlobalPair, opts: &AtlasOptions) -> Result<VerificationReport, AtlasError> {
        let mut r = VerificationReport::new();
        for (i, j, b) in self.overlaps() {
            let (p, q) = (&gp.pieces[i], &gp.pieces[j]);
            let v = p.eta.check_equal(&q.eta, &opts.boxed(&b, opts.overlap_samples))?;
            r.record(format!("chart_independence.{}.{}", p.chart, q.chart), &v, vec![]);
        }
        Ok(r)
    }
}

impl GlobalPair {
    pub fn order(&self) -> usize {
        self.eta.order()
    }

    /// The pair as a structure candidate of its Jacobi-type kind.
    pub fn candidate(&self) -> Candidate {
        Candidate::new(self.kind, self.eta.clone(), Some(self.companion.clone())).expect("glued pair is well formed")
    }

    /// The induced k-ary bracket.
    pub fn bracket(&self) -> Bracket {
        induced_bracket(self)
    }

    /// Defining identities of the glued kind, checked on every chart box.
    pub fn verify(&self, coords: &[String], opts: &AtlasOptions) -> Result<VerificationReport, AtlasError> {
        let cand = self.candidate();
        let fam = opts.family(self.eta.dim());
        let mut r = VerificationReport::new();
        for p in &self.pieces {
            let bx = opts.boxed(&p.bounds, opts.samples);
            r.extend_prefixed("", verify_with(&cand, &fam, &bx, opts.verify, Some(coords))?);
        }
        Ok(r)
    }

    /// Bounding box of all chart boxes.
    pub fn hull(&self, opts: &AtlasOptions) -> SampleBox {
        let n = self.eta.dim();
        let bounds: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let lo = self.pieces.iter().map(|p| p.bounds[i][0]).fold(f64::INFINITY, f64::min);
                let hi = self.pieces.iter().map(|p| p.bounds[i][1]).fold(f64::NEG_INFINITY, f64::max);
                [lo, hi]
            })
            .collect();
        opts.boxed(&bounds, opts.samples)
    }
}

/// Bracket `{F¹,…,F^k} = η(dF¹,…) + Σᵢ (−1)^{i+1} Fⁱ 𝓔(…dF̂ⁱ…)` of a glued pair.
pub fn induced_bracket(gp: &GlobalPair) -> Bracket {
    Bracket::new(gp.eta.clone(), Some(gp.companion.clone()))
}
