//! Identity testing by seeded point sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{EvalError, Expr};

/// Redraw budget per sample when evaluation fails at a drawn point.
pub const MAX_REDRAWS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("evaluation failed at {MAX_REDRAWS} consecutive draws: {0}")]
    Redraws(EvalError),
    #[error("invalid sample box: {0}")]
    InvalidBox(String),
}

/// Axis-aligned sampling region plus the equality protocol parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SampleBox {
    pub const DEFAULT_SAMPLES: usize = 64;
    pub const DEFAULT_TOL: f64 = 1e-9;
    pub const DEFAULT_SEED: u64 = 20_240_917;

    /// `[-1, 1]^dim` with the default protocol.
    pub fn unit(dim: usize) -> Self {
        SampleBox {
            lo: vec![-1.0; dim],
            hi: vec![1.0; dim],
            samples: Self::DEFAULT_SAMPLES,
            seed: Self::DEFAULT_SEED,
            tol: Self::DEFAULT_TOL,
        }
    }

    pub fn from_bounds(bounds: &[[f64; 2]]) -> Result<Self, SampleError> {
        let mut b = SampleBox::unit(bounds.len());
        for (i, [lo, hi]) in bounds.iter().enumerate() {
            b.lo[i] = *lo;
            b.hi[i] = *hi;
        }
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), SampleError> {
        if self.lo.len() != self.hi.len() {
            return Err(SampleError::InvalidBox("bound lengths differ".into()));
        }
        for (l, h) in self.lo.iter().zip(&self.hi) {
            if !(l.is_finite() && h.is_finite() && l <= h) {
                return Err(SampleError::InvalidBox(format!("bad interval [{l}, {h}]")));
            }
        }
        if self.samples == 0 {
            return Err(SampleError::InvalidBox("sample count must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(SampleError::InvalidBox("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Intersection with another box, `None` when empty or degenerate.
    pub fn intersect(&self, other: &SampleBox) -> Option<SampleBox> {
        let mut out = self.clone();
        for i in 0..self.dim() {
            out.lo[i] = self.lo[i].max(other.lo[i]);
            out.hi[i] = self.hi[i].min(other.hi[i]);
            if out.lo[i] >= out.hi[i] {
                return None;
            }
        }
        Some(out)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| if l == h { l } else { rng.gen_range(l..h) })
            .collect()
    }

    /// Draw `self.samples` points at which `accept` succeeds, re-drawing a
    /// point up to [`MAX_REDRAWS`] times when it fails.
    pub fn sample_with<T>(
        &self,
        mut accept: impl FnMut(&[f64]) -> Result<T, EvalError>,
    ) -> Result<Vec<(Vec<f64>, T)>, SampleError> {
        self.validate()?;
        let mut rng = self.rng();
        let mut out = Vec::with_capacity(self.samples);
        for _ in 0..self.samples {
            let mut attempt = 0;
            loop {
                let p = self.draw(&mut rng);
                match accept(&p) {
                    Ok(v) => {
                        out.push((p, v));
                        break;
                    }
                    Err(e) => {
                        attempt += 1;
                        if attempt >= MAX_REDRAWS {
                            return Err(SampleError::Redraws(e));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Outcome of a sampled identity test.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Every sample satisfied `|a-b| <= tol (1 + |a| + |b|)`.
    Equal { max_residual: f64 },
    /// Definitive failure at `witness`.
    Unequal { witness: Vec<f64>, residual: f64, max_residual: f64 },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }

    pub fn max_residual(&self) -> f64 {
        match self {
            Verdict::Equal { max_residual } | Verdict::Unequal { max_residual, .. } => *max_residual,
        }
    }

    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            Verdict::Equal { .. } => None,
            Verdict::Unequal { witness, .. } => Some(witness),
        }
    }
}

/// Decide `a ≡ b` on `bx`.
pub fn equal_probabilistic(a: &Expr, b: &Expr, bx: &SampleBox) -> Result<Verdict, SampleError> {
    check_pairs(&[(a.clone(), b.clone())], bx)
}

/// Decide whether every expression vanishes identically on `bx`.
pub fn check_zero(exprs: &[Expr], bx: &SampleBox) -> Result<Verdict, SampleError> {
    let pairs: Vec<(Expr, Expr)> = exprs.iter().map(|e| (e.clone(), Expr::zero())).collect();
    check_pairs(&pairs, bx)
}

/// Decide `aᵢ ≡ bᵢ` for every pair, sharing one sample stream.
///
/// Pairs whose canonical difference is exactly zero are settled without
/// sampling.
pub fn check_pairs(pairs: &[(Expr, Expr)], bx: &SampleBox) -> Result<Verdict, SampleError> {
    bx.validate()?;
    let open: Vec<(&Expr, &Expr, Expr)> = pairs
        .iter()
        .filter_map(|(a, b)| {
            let d = a.sub(b);
            (!d.is_zero()).then_some((a, b, d))
        })
        .collect();
    if open.is_empty() {
        return Ok(Verdict::Equal { max_residual: 0.0 });
    }
    let samples = bx.sample_with(|p| {
        let mut worst = (0.0f64, 0.0f64);
        for (a, b, d) in &open {
            let r = d.eval(p)?.abs();
            let scale = 1.0 + a.eval(p)?.abs() + b.eval(p)?.abs();
            worst = (worst.0.max(r), worst.1.max(r / scale));
        }
        Ok(worst)
    })?;
    let max_residual = samples.iter().map(|(_, (r, _))| *r).fold(0.0, f64::max);
    let (worst_point, (worst_r, worst_rel)) = samples
        .iter()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(p, v)| (p.clone(), *v))
        .unwrap();
    if worst_rel > bx.tol {
        Ok(Verdict::Unequal { witness: worst_point, residual: worst_r, max_residual })
    } else {
        Ok(Verdict::Equal { max_residual })
    }
}
