#![allow(dead_code)]

use multivector::{Form, MultiVector};
use scalar_expr::{default_coords, parse, Expr};

pub fn coords(n: usize) -> Vec<String> {
    default_coords(n)
}

pub fn e(n: usize, s: &str) -> Expr {
    parse(s, &coords(n)).unwrap()
}

pub fn basis(n: usize, idx: &[usize], c: Expr) -> MultiVector {
    MultiVector::monomial(n, idx, c)
}

pub fn so3() -> MultiVector {
    MultiVector::from_terms(
        3,
        2,
        [(vec![0, 1], e(3, "x3")), (vec![1, 2], e(3, "x1")), (vec![2, 0], e(3, "x2"))],
    )
    .unwrap()
}

/// `(−1)^k ι_θ η` for `θ = dσ`.
pub fn companion(eta: &MultiVector, sigma: &Expr) -> MultiVector {
    let theta = Form::differential(eta.dim(), sigma);
    let c = eta.contract(&theta);
    if eta.order() % 2 == 0 {
        c
    } else {
        c.neg()
    }
}

/// Nambu–Jacobi pair on ℝ³: `η = (1+x2²)∂₁₂₃`, Lee form `d(x1+x3)`.
pub fn nj3() -> (MultiVector, MultiVector) {
    let eta = basis(3, &[0, 1, 2], e(3, "1 + x2^2"));
    let c = companion(&eta, &e(3, "x1 + x3"));
    (eta, c)
}

/// Nambu–Jacobi pair on ℝ⁵: `η = (1+x5²)∂₁₂₃₄`, Lee form `d(x1+x5)`.
pub fn nj4() -> (MultiVector, MultiVector) {
    let eta = basis(5, &[0, 1, 2, 3], e(5, "1 + x5^2"));
    let c = companion(&eta, &e(5, "x1 + x5"));
    (eta, c)
}

/// `∂₁₂₃ + ∂₄₅₆` on ℝ⁶, not decomposable.
pub fn r6() -> MultiVector {
    basis(6, &[0, 1, 2], Expr::one()).add(&basis(6, &[3, 4, 5], Expr::one()))
}
