//! Seeded random polynomials for test families.

use rand::Rng;

use crate::expr::Expr;

/// All exponent vectors of total degree `<= degree` in `dim` variables, in
/// graded lexicographic order.
pub fn monomial_exponents(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for p in (0..=left).rev() {
            prefix.push(p);
            rec(dim, left - p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut level = Vec::new();
        rec(dim, d, &mut Vec::new(), &mut level);
        level.retain(|e| e.iter().sum::<u32>() == d);
        out.extend(level);
    }
    out
}

/// The monomial `Π xᵢ^{eᵢ}`.
pub fn monomial(exponents: &[u32]) -> Expr {
    let mut m = Expr::one();
    for (i, &p) in exponents.iter().enumerate() {
        if p > 0 {
            m = m.mul(&Expr::var(i).powi(p));
        }
    }
    m
}

/// Dense polynomial of degree `<= degree` with integer coefficients drawn
/// uniformly from `-bound..=bound`.
pub fn random_polynomial(dim: usize, degree: u32, bound: i64, rng: &mut impl Rng) -> Expr {
    let mut acc = Expr::zero();
    for e in monomial_exponents(dim, degree) {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            acc = acc.add(&monomial(&e).scale_int(c));
        }
    }
    acc
}

/// Polynomial with `terms` randomly chosen monomials of degree `<= degree`
/// and nonzero coefficients in `-bound..=bound`.
pub fn sparse_polynomial(dim: usize, degree: u32, terms: usize, bound: i64, rng: &mut impl Rng) -> Expr {
    let all = monomial_exponents(dim, degree);
    let mut acc = Expr::zero();
    for _ in 0..terms {
        let e = &all[rng.gen_range(0..all.len())];
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-bound..=bound);
        }
        acc = acc.add(&monomial(e).scale_int(c));
    }
    acc
}
