#![allow(dead_code)]

use conformal_atlas::{AtlasOptions, Chart, ConformalAtlas};
use multivector::MultiVector;
use scalar_expr::{default_coords, parse, Expr};
use structures::Kind;

pub fn e(n: usize, s: &str) -> Expr {
    parse(s, &default_coords(n)).unwrap()
}

pub fn mv(n: usize, terms: &[(&[usize], &str)]) -> MultiVector {
    let order = terms[0].0.len();
    MultiVector::from_terms(n, order, terms.iter().map(|(i, s)| (i.to_vec(), e(n, s)))).unwrap()
}

pub fn unit(n: usize) -> Vec<[f64; 2]> {
    vec![[-1.0, 1.0]; n]
}

pub fn opts() -> AtlasOptions {
    AtlasOptions::default()
}

pub fn atlas(n: usize, kind: Kind, charts: Vec<Chart>) -> ConformalAtlas {
    ConformalAtlas::new(default_coords(n), kind, charts).unwrap()
}

pub fn chart(name: &str, bounds: Vec<[f64; 2]>, tensor: MultiVector, sigma: Expr) -> Chart {
    Chart::new(name, bounds, tensor, sigma)
}

/// Three overlapping charts on ℝ² with `Λ_α = e^{x+c}∂x∧∂y`, `σ_α = x + c`.
pub fn three_chart(beta_sigma: Option<&str>) -> ConformalAtlas {
    let layout = [("alpha", "x1", [-1.0, 1.0]), ("beta", "x1 + 1", [0.0, 2.0]), ("gamma", "x1 + 3", [0.5, 3.0])];
    let charts = layout
        .iter()
        .map(|(name, s, xb)| {
            let sigma = match (*name, beta_sigma) {
                ("beta", Some(b)) => e(2, b),
                _ => e(2, s),
            };
            let t = mv(2, &[(&[0, 1], &format!("exp({s})"))]);
            chart(name, vec![*xb, [-1.0, 1.0]], t, sigma)
        })
        .collect();
    atlas(2, Kind::Poisson, charts)
}

/// `η_α = e^{2x₁}∂₁₂₃` on ℝⁿ with `σ = x₁`.
pub fn np3_exp(n: usize) -> ConformalAtlas {
    let t = mv(n, &[(&[0, 1, 2], "exp(2*x1)")]);
    atlas(n, Kind::NambuPoisson(3), vec![chart("alpha", unit(n), t, e(n, "x1"))])
}

/// Two charts on ℝ³ gluing to `η = (1+x₂²)∂₁₂₃` with Lee form `d(x₁+x₃)`.
pub fn np3_two_chart() -> ConformalAtlas {
    let c = |name: &str, shift: &str, b: [f64; 2]| {
        let sigma = format!("x1 + x3{shift}");
        let t = mv(3, &[(&[0, 1, 2], &format!("(1 + x2^2)*exp(2*({sigma}))"))]);
        chart(name, vec![b, [-1.0, 1.0], [-1.0, 1.0]], t, e(3, &sigma))
    };
    atlas(3, Kind::NambuPoisson(3), vec![c("alpha", "", [-1.0, 0.5]), c("beta", " + 2", [0.0, 1.0])])
}

/// One chart on ℝ⁵ gluing to `η = (1+x₅²)∂₁₂₃₄` with Lee form `d(x₁+x₅)`.
pub fn np4() -> ConformalAtlas {
    let t = mv(5, &[(&[0, 1, 2, 3], "(1 + x5^2)*exp(3*(x1 + x5))")]);
    atlas(5, Kind::NambuPoisson(4), vec![chart("alpha", unit(5), t, e(5, "x1 + x5"))])
}

/// `η_α = ∂₁₂₃₄ + ∂₅₆₇₈` on ℝ⁸ with `σ = x₁`.
pub fn gp4() -> ConformalAtlas {
    let t = mv(8, &[(&[0, 1, 2, 3], "1"), (&[4, 5, 6, 7], "1")]);
    atlas(8, Kind::GeneralizedPoisson(4), vec![chart("alpha", unit(8), t, e(8, "x1"))])
}

/// Generalized Poisson of order two on ℝ²: `e^{x₂}∂₁₂` with `σ = x₂`.
pub fn gp2() -> ConformalAtlas {
    let t = mv(2, &[(&[0, 1], "exp(x2)")]);
    atlas(2, Kind::GeneralizedPoisson(2), vec![chart("alpha", unit(2), t, e(2, "x2"))])
}

/// ℝ⁴ with `Λ_α = ∂₁₂ + ∂₃₄`, `σ = x₁`.
pub fn r4_symplectic() -> ConformalAtlas {
    let t = mv(4, &[(&[0, 1], "1"), (&[2, 3], "1")]);
    atlas(4, Kind::Poisson, vec![chart("alpha", unit(4), t, e(4, "x1"))])
}

/// ℝ⁴ with `Λ_α = e^{x₁}(∂₁₂ + ∂₃₄)`, `σ = x₁`; `Λ_α` is not Poisson.
pub fn r4_exp() -> ConformalAtlas {
    let t = mv(4, &[(&[0, 1], "exp(x1)"), (&[2, 3], "exp(x1)")]);
    atlas(4, Kind::Poisson, vec![chart("alpha", unit(4), t, e(4, "x1"))])
}
