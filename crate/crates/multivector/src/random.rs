//! Seeded random fields for property tests.

use rand::Rng;
use scalar_expr::random::sparse_polynomial;
use scalar_expr::Expr;

use crate::skew::{MultiVector, Skew};

/// Vector field with sparse polynomial components of degree `<= 2`.
pub fn random_vector_field(dim: usize, rng: &mut impl Rng) -> MultiVector {
    MultiVector::vector(dim, (0..dim).map(|_| sparse_polynomial(dim, 2, 2, 3, rng)))
}

/// `X₁ ∧ … ∧ X_m` of random vector fields.
pub fn random_decomposable(dim: usize, order: usize, rng: &mut impl Rng) -> (MultiVector, Vec<MultiVector>) {
    let factors: Vec<MultiVector> = (0..order).map(|_| random_vector_field(dim, rng)).collect();
    let mut acc = MultiVector::scalar(dim, Expr::one());
    for f in &factors {
        acc = acc.wedge(f);
    }
    (acc, factors)
}

/// General order-`order` skew tensor: each basis tuple gets a sparse
/// polynomial coefficient with probability one half.
pub fn random_skew<K>(dim: usize, order: usize, rng: &mut impl Rng) -> Skew<K> {
    if order == 0 {
        return Skew::scalar(dim, sparse_polynomial(dim, 2, 3, 3, rng));
    }
    let mut terms = Vec::new();
    let mut idx: Vec<usize> = (0..order).collect();
    if order <= dim {
        loop {
            if rng.gen_bool(0.5) {
                terms.push((idx.clone(), sparse_polynomial(dim, 2, 2, 3, rng)));
            }
            // next combination in lexicographic order
            let mut i = order;
            while i > 0 && idx[i - 1] == dim - order + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..order {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Skew::from_terms(dim, order, terms).unwrap()
}
