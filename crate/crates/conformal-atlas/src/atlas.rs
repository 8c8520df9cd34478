//! Charts, atlases and their validation.

use multivector::{Form, MultiVector, MvError};
use scalar_expr::{Expr, SampleBox, SampleError};
use structures::{verify_with, Candidate, FunctionFamily, Kind, StructureError, VerificationReport, VerifyOptions};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("atlas has no charts")]
    Empty,
    #[error("atlas kind must be Poisson, Nambu-Poisson or generalized Poisson, got {0}")]
    Kind(Kind),
    #[error("chart {chart}: {reason}")]
    Chart { chart: String, reason: String },
    #[error("charts {0} and {1} overlap but carry tensors of different order")]
    OrderMismatch(String, String),
    #[error("atlas failed validation")]
    Invalid(Box<VerificationReport>),
    #[error("chart overlaps do not connect {0} to the first chart")]
    Disconnected(String),
    #[error("fixers of charts {a} and {b} disagree on their overlap (residual {residual:e} at {point:?})")]
    FixerMismatch { a: String, b: String, point: Vec<f64>, residual: f64 },
    #[error("expected {expected} fixers, got {got}")]
    FixerCount { expected: usize, got: usize },
    #[error("operation needs a tensor of order {expected}, got {got}")]
    Order { expected: usize, got: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Multivector(#[from] MvError),
}

/// A chart `(U_α, η_α, σ_α)`; every chart uses the global coordinates and
/// `U_α` is an open box.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub name: String,
    pub bounds: Vec<[f64; 2]>,
    pub tensor: MultiVector,
    pub sigma: Expr,
}

impl Chart {
    pub fn new(name: impl Into<String>, bounds: Vec<[f64; 2]>, tensor: MultiVector, sigma: Expr) -> Self {
        Chart { name: name.into(), bounds, tensor, sigma }
    }

    /// Sampling box over the chart with the given protocol.
    pub fn sample_box(&self, opts: &AtlasOptions) -> SampleBox {
        opts.boxed(&self.bounds, opts.samples)
    }

    /// `e^{−wσ_α} η_α`.
    pub fn rescaled(&self, weight: usize) -> MultiVector {
        self.tensor.scale(&self.sigma.scale_int(-(weight as i64)).exp())
    }

    pub fn lee_form(&self) -> Form {
        Form::differential(self.tensor.dim(), &self.sigma)
    }

    fn overlap(&self, other: &Chart) -> Option<Vec<[f64; 2]>> {
        let mut out = Vec::with_capacity(self.bounds.len());
        for (a, b) in self.bounds.iter().zip(&other.bounds) {
            let (lo, hi) = (a[0].max(b[0]), a[1].min(b[1]));
            if lo >= hi {
                return None;
            }
            out.push([lo, hi]);
        }
        Some(out)
    }
}

/// Sampling protocol and budgets shared by the atlas operations.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasOptions {
    pub seed: u64,
    pub tol: f64,
    /// Samples per chart box.
    pub samples: usize,
    /// Samples per overlap box.
    pub overlap_samples: usize,
    /// Random members of the test-function family.
    pub random_functions: usize,
    pub verify: VerifyOptions,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions {
            seed: SampleBox::DEFAULT_SEED,
            tol: SampleBox::DEFAULT_TOL,
            samples: SampleBox::DEFAULT_SAMPLES,
            overlap_samples: 32,
            random_functions: 8,
            verify: VerifyOptions::default(),
        }
    }
}

impl AtlasOptions {
    pub(crate) fn boxed(&self, bounds: &[[f64; 2]], samples: usize) -> SampleBox {
        SampleBox {
            lo: bounds.iter().map(|b| b[0]).collect(),
            hi: bounds.iter().map(|b| b[1]).collect(),
            samples,
            seed: self.seed,
            tol: self.tol,
        }
    }

    pub(crate) fn family(&self, dim: usize) -> FunctionFamily {
        FunctionFamily::standard(dim, self.random_functions, self.seed)
    }
}

/// Transition scalar `λ_{βα} = e^{−w(σ_β − σ_α)}` of an ordered chart pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionScalar {
    pub to: String,
    pub from: String,
    pub value: Expr,
}

/// A locally conformal Poisson, Nambu–Poisson or generalized Poisson atlas
/// on a box region of ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalAtlas {
    coords: Vec<String>,
    kind: Kind,
    charts: Vec<Chart>,
}

impl ConformalAtlas {
    pub fn new(coords: Vec<String>, kind: Kind, charts: Vec<Chart>) -> Result<Self, AtlasError> {
        if charts.is_empty() {
            return Err(AtlasError::Empty);
        }
        let kind = match kind {
            Kind::NambuPoisson(2) | Kind::GeneralizedPoisson(2) => Kind::Poisson,
            Kind::Poisson | Kind::NambuPoisson(_) | Kind::GeneralizedPoisson(_) => kind,
            other => return Err(AtlasError::Kind(other)),
        };
        // rejects odd generalized orders and too small Nambu orders
        Candidate::new(kind, MultiVector::zero(0, kind.arity()), None)?;
        let n = coords.len();
        for c in &charts {
            let bad = |reason: String| AtlasError::Chart { chart: c.name.clone(), reason };
            if c.bounds.len() != n {
                return Err(bad(format!("box has {} intervals for {n} coordinates", c.bounds.len())));
            }
            if c.bounds.iter().any(|b| !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1])) {
                return Err(bad("box is degenerate".into()));
            }
            if c.tensor.dim() != n {
                return Err(bad(format!("tensor lives on {} coordinates, atlas has {n}", c.tensor.dim())));
            }
            if c.sigma.max_var().is_some_and(|v| v >= n) {
                return Err(bad("potential uses an unknown coordinate".into()));
            }
        }
        for (i, a) in charts.iter().enumerate() {
            for b in &charts[i + 1..] {
                if a.name == b.name {
                    return Err(AtlasError::Chart { chart: a.name.clone(), reason: "duplicate chart name".into() });
                }
                if a.tensor.order() != b.tensor.order() && a.overlap(b).is_some() {
                    return Err(AtlasError::OrderMismatch(a.name.clone(), b.name.clone()));
                }
            }
        }
        if let Some(c) = charts.iter().find(|c| c.tensor.order() != kind.arity()) {
            return Err(AtlasError::Chart {
                chart: c.name.clone(),
                reason: format!("{kind} needs order {}, tensor has order {}", kind.arity(), c.tensor.order()),
            });
        }
        Ok(ConformalAtlas { coords, kind, charts })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Tensor order `k`.
    pub fn order(&self) -> usize {
        self.kind.arity()
    }

    /// Conformal weight `w = k − 1`.
    pub fn weight(&self) -> usize {
        self.order() - 1
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, name: &str) -> Option<&Chart> {
        self.charts.iter().find(|c| c.name == name)
    }

    /// Index pairs of overlapping charts with their intersection box.
    pub fn overlaps(&self) -> Vec<(usize, usize, Vec<[f64; 2]>)> {
        let mut out = Vec::new();
        for i in 0..self.charts.len() {
            for j in i + 1..self.charts.len() {
                if let Some(b) = self.charts[i].overlap(&self.charts[j]) {
                    out.push((i, j, b));
                }
            }
        }
        out
    }

    /// Index triples with a common intersection.
    pub fn triple_overlaps(&self) -> Vec<(usize, usize, usize, Vec<[f64; 2]>)> {
        let mut out = Vec::new();
        for (i, j, ij) in self.overlaps() {
            for k in j + 1..self.charts.len() {
                let tmp = Chart::new("", ij.clone(), MultiVector::zero(0, 0), Expr::zero());
                if let Some(b) = tmp.overlap(&self.charts[k]) {
                    out.push((i, j, k, b));
                }
            }
        }
        out
    }

    /// `λ_{βα}` for charts `β = to`, `α = from`.
    pub fn transition(&self, to: usize, from: usize) -> TransitionScalar {
        let (b, a) = (&self.charts[to], &self.charts[from]);
        let w = self.weight() as i64;
        TransitionScalar {
            to: b.name.clone(),
            from: a.name.clone(),
            value: b.sigma.sub(&a.sigma).scale_int(-w).exp(),
        }
    }

    /// Transition scalars of every overlapping pair, in both orders.
    pub fn transitions(&self) -> Vec<TransitionScalar> {
        self.overlaps().into_iter().flat_map(|(i, j, _)| [self.transition(j, i), self.transition(i, j)]).collect()
    }

    /// Check each local structure, overlap conformality, Lee consistency and
    /// the cocycle condition.
    ///
    /// Report names: `chart.<name>.<identity>`, `overlap.<a>.<b>.conformal`,
    /// `overlap.<a>.<b>.lee`, `cocycle.<a>.<b>.<c>`.
    pub fn validate(&self, opts: &AtlasOptions) -> Result<VerificationReport, AtlasError> {
        let mut r = VerificationReport::new();
        let fam = opts.family(self.dim());
        for c in &self.charts {
            let cand = Candidate::new(self.kind, c.tensor.clone(), None)?;
            let local = verify_with(&cand, &fam, &c.sample_box(opts), opts.verify, Some(&self.coords))?;
            r.extend_prefixed(&format!("chart.{}.", c.name), local);
        }
        let w = self.weight();
        for (i, j, b) in self.overlaps() {
            let (a, c) = (&self.charts[i], &self.charts[j]);
            let bx = opts.boxed(&b, opts.overlap_samples);
            let tag = format!("overlap.{}.{}", a.name, c.name);
            r.record(format!("{tag}.conformal"), &a.rescaled(w).check_equal(&c.rescaled(w), &bx)?, vec![]);
            r.record(format!("{tag}.lee"), &a.lee_form().check_equal(&c.lee_form(), &bx)?, vec![]);
        }
        for (i, j, k, b) in self.triple_overlaps() {
            let bx = opts.boxed(&b, opts.overlap_samples);
            // λ_{βα} λ_{αγ} = λ_{βγ} with α = i, β = j, γ = k
            let lhs = self.transition(j, i).value.mul(&self.transition(i, k).value);
            let rhs = self.transition(j, k).value;
            let v = scalar_expr::equal_probabilistic(&lhs, &rhs, &bx)?;
            let names = [i, j, k].map(|x| self.charts[x].name.as_str());
            r.record(format!("cocycle.{}.{}.{}", names[0], names[1], names[2]), &v, vec![]);
        }
        Ok(r)
    }

    /// Chart indices reachable from the first chart through overlaps.
    pub(crate) fn check_connected(&self) -> Result<(), AtlasError> {
        let n = self.charts.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let pairs = self.overlaps();
        while let Some(i) = stack.pop() {
            for (a, b, _) in &pairs {
                for (x, y) in [(*a, *b), (*b, *a)] {
                    if x == i && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(AtlasError::Disconnected(self.charts[i].name.clone())),
            None => Ok(()),
        }
    }
}
