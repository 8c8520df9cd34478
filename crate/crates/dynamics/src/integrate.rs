//! Fixed-step fourth-order Runge–Kutta integration.

use std::fmt::Write;

use multivector::MultiVector;
use scalar_expr::{EvalError, Expr};

use crate::system::{DynamicsError, HamiltonianSystem};

/// States on the uniform grid `t₀ + i·h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub step: f64,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.step
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// CSV with header `t,x1,...,xn`.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=n {
            write!(out, ",x{i}").unwrap();
        }
        out.push('\n');
        for (i, s) in self.states.iter().enumerate() {
            write!(out, "{}", self.time(i)).unwrap();
            for v in s {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Component-wise evaluator of a vector field.
pub(crate) struct Field {
    comps: Vec<Expr>,
}

impl Field {
    pub(crate) fn new(x: &MultiVector) -> Self {
        Field { comps: (0..x.dim()).map(|i| x.component(i)).collect() }
    }

    pub(crate) fn eval(&self, p: &[f64]) -> Result<Vec<f64>, scalar_expr::EvalError> {
        self.comps.iter().map(|c| c.eval(p)).collect()
    }
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(x, k)| x + a * k).collect()
}

/// Integrate `ẋ = X(x)` from `x0` over `[0, t_end]` with the largest
/// uniform step not exceeding `h`.
pub fn integrate_field(field: &MultiVector, x0: &[f64], t_end: f64, h: f64) -> Result<Trajectory, DynamicsError> {
    if x0.len() != field.dim() {
        return Err(DynamicsError::Dimension { expected: field.dim(), got: x0.len() });
    }
    if !(h > 0.0 && h.is_finite() && t_end >= 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::Step);
    }
    let f = Field::new(field);
    // the grid ends exactly at t_end; the step shrinks to t_end / steps
    let steps = (t_end / h - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { h } else { t_end / steps as f64 };
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0.to_vec());
    let mut x = x0.to_vec();
    for step in 0..steps {
        let eval = |p: &[f64]| {
            f.eval(p).map_err(|source| match source {
                EvalError::NonFinite => DynamicsError::BlowUp { step, time: step as f64 * h },
                source => DynamicsError::Eval { step, source },
            })
        };
        let k1 = eval(&x)?;
        let k2 = eval(&axpy(&x, h / 2.0, &k1))?;
        let k3 = eval(&axpy(&x, h / 2.0, &k2))?;
        let k4 = eval(&axpy(&x, h, &k3))?;
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::BlowUp { step: step + 1, time: (step + 1) as f64 * h });
        }
        states.push(x.clone());
    }
    Ok(Trajectory { t0: 0.0, step: h, states })
}

/// Integrate the Hamiltonian vector field of `sys`.
pub fn integrate(sys: &HamiltonianSystem, x0: &[f64], t_end: f64, h: f64) -> Result<Trajectory, DynamicsError> {
    if x0.len() != sys.dim() {
        return Err(DynamicsError::Dimension { expected: sys.dim(), got: x0.len() });
    }
    if let Some(b) = sys.bounds() {
        if x0.iter().zip(b).any(|(x, [lo, hi])| x < lo || x > hi) {
            return Err(DynamicsError::OutsideBox);
        }
    }
    integrate_field(&sys.vector_field(), x0, t_end, h)
}
