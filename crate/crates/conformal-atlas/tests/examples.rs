mod common;

use common::*;
use conformal_atlas::{
    contracted_pair, contracted_pair_literal, contracted_pair_twisted, lift_to_4gp, AtlasError, Fixer, GlobalPair,
};
use multivector::{Form, MultiVector};
use scalar_expr::{Expr, SampleBox};
use structures::{cascade_contract, Kind};

fn assert_same(a: &MultiVector, b: &MultiVector, bx: &SampleBox) {
    let v = a.check_equal(b, bx).unwrap();
    assert!(v.is_equal(), "residual {} at {:?}", v.max_residual(), v.witness());
}

#[test]
fn single_chart_validates_without_overlaps() {
    let a = atlas(2, Kind::Poisson, vec![chart("alpha", unit(2), mv(2, &[(&[0, 1], "1")]), Expr::zero())]);
    let r = a.validate(&opts()).unwrap();
    assert!(r.passed());
    assert!(r.identities.keys().all(|k| k.starts_with("chart.")));
}

#[test]
fn three_chart_cocycle() {
    let a = three_chart(None);
    let r = a.validate(&opts()).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert!(r.get("cocycle.alpha.beta.gamma").unwrap().pass);
    assert_eq!(a.transition(1, 0).value, Expr::int(-1).exp());
    let product = a.transition(1, 0).value.mul(&a.transition(0, 2).value);
    assert_eq!(product, a.transition(1, 2).value);
    assert_eq!(a.transitions().len(), 6);
}

#[test]
fn lee_inconsistency_has_witness() {
    let a = three_chart(Some("x1^2"));
    let r = a.validate(&opts()).unwrap();
    let lee = r.get("overlap.alpha.beta.lee").unwrap();
    assert!(!lee.pass);
    let w = lee.witness.as_ref().unwrap();
    assert!((w.point[0] - 0.5).abs() > 1e-6);
    assert!(matches!(a.glue(&opts()), Err(AtlasError::Invalid(_))));
}

#[test]
fn structural_errors() {
    let t2 = mv(2, &[(&[0, 1], "1")]);
    let t3 = mv(3, &[(&[0, 1, 2], "1")]);
    let c = conformal_atlas::ConformalAtlas::new(scalar_expr::default_coords(2), Kind::Poisson, vec![]);
    assert_eq!(c.unwrap_err(), AtlasError::Empty);
    let bad = conformal_atlas::ConformalAtlas::new(
        scalar_expr::default_coords(3),
        Kind::NambuPoisson(3),
        vec![chart("a", unit(3), t3.clone(), Expr::zero()), chart("b", unit(3), t2.embed(3), Expr::zero())],
    );
    assert!(matches!(bad, Err(AtlasError::OrderMismatch(..))));
    let disjoint = atlas(
        2,
        Kind::Poisson,
        vec![chart("a", unit(2), t2.clone(), Expr::zero()), chart("b", vec![[2.0, 3.0], [-1.0, 1.0]], t2, Expr::zero())],
    );
    assert!(matches!(disjoint.glue_unchecked(), Err(AtlasError::Disconnected(_))));
}

#[test]
fn glue_examples() {
    let gp = np3_exp(3).glue(&opts()).unwrap();
    assert_eq!(gp.kind, Kind::NambuJacobi(3));
    assert_eq!(gp.eta, mv(3, &[(&[0, 1, 2], "1")]));
    assert_eq!(gp.companion, mv(3, &[(&[1, 2], "-1")]));
    assert_eq!(gp.theta, Form::basis(3, 0));

    let a = three_chart(None);
    let gp = a.glue(&opts()).unwrap();
    assert_eq!(gp.kind, Kind::Jacobi);
    assert_eq!(gp.eta, mv(2, &[(&[0, 1], "1")]));
    assert_eq!(gp.companion, mv(2, &[(&[1], "-1")]));
    assert!(gp.pieces.iter().all(|p| p.theta == Form::basis(2, 0)));
    let r = a.chart_independence(&gp, &opts()).unwrap();
    assert!(r.passed() && r.max_residual() < 1e-12);
}

#[test]
fn broken_overlap_is_detected() {
    let mut charts = three_chart(None).charts().to_vec();
    charts[1].tensor = mv(2, &[(&[0, 1], "2*exp(x1 + 1)")]);
    let a = atlas(2, Kind::Poisson, charts);
    let r = a.validate(&opts()).unwrap();
    let c = r.get("overlap.alpha.beta.conformal").unwrap();
    assert!(!c.pass && c.witness.is_some());
    assert!(r.get("overlap.alpha.beta.lee").unwrap().pass);
}

#[test]
fn induced_bracket_examples() {
    let flat = atlas(3, Kind::NambuPoisson(3), vec![chart("a", unit(3), mv(3, &[(&[0, 1, 2], "x2")]), Expr::int(4))]);
    let gp = flat.glue(&opts()).unwrap();
    assert!(gp.companion.is_zero());
    let fs = [e(3, "x1*x2"), e(3, "x3"), e(3, "x2^2 + x1")];
    let np = structures::Bracket::new(gp.eta.clone(), None).eval(&fs).unwrap();
    assert_eq!(gp.bracket().eval(&fs).unwrap(), np);

    let a = np3_exp(3);
    let gp = a.glue(&opts()).unwrap();
    assert_eq!(gp.bracket().eval(&[Expr::one(), e(3, "x2"), e(3, "x3")]).unwrap(), Expr::int(-1));
    let r = a.check_local_global(&gp, &[e(3, "x1*x2 + 1"), e(3, "x3^2"), e(3, "x2 - x3")], &opts()).unwrap();
    assert!(r.passed() && r.max_residual() == 0.0);

    let a = np3_two_chart();
    let gp = a.glue(&opts()).unwrap();
    let r = a.check_local_global(&gp, &[e(3, "x1"), e(3, "x2*x3"), e(3, "x1^2 - x2")], &opts()).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn poisson_atlases_glue_to_jacobi() {
    for a in [three_chart(None), r4_symplectic(), gp2()] {
        let gp = a.glue(&opts()).unwrap();
        let r = gp.verify(a.coords(), &opts()).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    let gp = r4_symplectic().glue(&opts()).unwrap();
    assert_eq!(gp.eta, mv(4, &[(&[0, 1], "exp(-x1)"), (&[2, 3], "exp(-x1)")]));
    assert_eq!(gp.companion, mv(4, &[(&[1], "-exp(-x1)")]));
}

/// `e^{x₁}(∂₁₂ + ∂₃₄)` is not a Poisson bivector, so this atlas is not
/// locally conformal Poisson and its rescaled pair is not Jacobi.
#[test]
fn exponential_symplectic_chart_is_not_poisson() {
    let a = r4_exp();
    let r = a.validate(&opts()).unwrap();
    assert!(!r.get("chart.alpha.poisson_condition").unwrap().pass);
    let gp = a.glue_unchecked().unwrap();
    assert_eq!(gp.eta, mv(4, &[(&[0, 1], "1"), (&[2, 3], "1")]));
    assert_eq!(gp.companion, mv(4, &[(&[1], "-1")]));
    let r = gp.verify(a.coords(), &opts()).unwrap();
    assert!(!r.get("jacobi_lambda").unwrap().pass);
    assert!(r.get("jacobi_z").unwrap().pass);
}

#[test]
fn nambu_atlases_glue_to_nambu_jacobi() {
    for a in [np3_exp(3), np3_two_chart(), np4()] {
        let v = a.validate(&opts()).unwrap();
        assert!(v.passed(), "{:?}", v.failures().collect::<Vec<_>>());
        let gp = a.glue_unchecked().unwrap();
        let r = gp.verify(a.coords(), &opts()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.get("fundamental_identity").is_some());
    }
    let gp = np4().glue_unchecked().unwrap();
    assert_eq!(gp.eta, mv(5, &[(&[0, 1, 2, 3], "1 + x5^2")]));
    assert_eq!(gp.companion, mv(5, &[(&[1, 2, 3], "-1 - x5^2")]));
}

#[test]
fn generalized_atlas_glues_to_generalized_jacobi() {
    let a = gp4();
    let gp = a.glue(&opts()).unwrap();
    assert_eq!(gp.kind, Kind::GeneralizedJacobi(4));
    assert_eq!(gp.companion, mv(8, &[(&[1, 2, 3], "-exp(-3*x1)")]));
    let r = gp.verify(a.coords(), &opts()).unwrap();
    assert!(r.get("gj_eta").unwrap().pass && r.get("gj_companion").unwrap().pass);
    assert_eq!(r.max_residual(), 0.0);
}

#[test]
fn contraction_examples() {
    let a = np3_exp(3);
    let local = Fixer::Local(vec![e(3, "exp(-x1)*x3")]);
    let c = a.contract(&local, &opts()).unwrap();
    assert_eq!(c.kind(), Kind::Poisson);
    assert_eq!(c.charts()[0].sigma, e(3, "x1"));
    let df = Form::differential(3, &e(3, "exp(-x1)*x3"));
    assert_eq!(c.charts()[0].tensor, a.charts()[0].tensor.contract(&df));
    assert!(c.validate(&opts()).unwrap().passed());
    assert_eq!(c, a.contract(&Fixer::Global(e(3, "x3")), &opts()).unwrap());

    let flat = atlas(3, Kind::NambuPoisson(3), vec![chart("a", unit(3), mv(3, &[(&[0, 1, 2], "1")]), Expr::int(2))]);
    let gp = flat.contract(&Fixer::Global(e(3, "x3")), &opts()).unwrap().glue(&opts()).unwrap();
    let eta = flat.glue_unchecked().unwrap().eta;
    assert_eq!(eta, mv(3, &[(&[0, 1, 2], "exp(-4)")]));
    assert_eq!(gp.eta, eta.contract(&Form::basis(3, 2)));
    assert!(gp.companion.is_zero());
}

#[test]
fn mismatched_local_fixers_are_rejected() {
    let a = np3_two_chart();
    let fs = vec![e(3, "x2*exp(-x1 - x3)"), e(3, "x2*exp(-x1 - x3)")];
    assert!(matches!(a.contract(&Fixer::Local(fs), &opts()), Err(AtlasError::FixerMismatch { .. })));
    let fs = vec![e(3, "x2*exp(-x1 - x3)"), e(3, "x2*exp(-x1 - x3 - 2)")];
    assert!(a.contract(&Fixer::Local(fs), &opts()).is_ok());
}

fn contract_then_glue(a: &conformal_atlas::ConformalAtlas, f: &Expr) -> GlobalPair {
    a.contract(&Fixer::Global(f.clone()), &opts()).unwrap().glue_unchecked().unwrap()
}

#[test]
fn gluing_commutes_with_contraction() {
    let cases = [(np3_exp(3), e(3, "x3 + x1*x2")), (np3_two_chart(), e(3, "x2^2 - x3")), (np4(), e(5, "x4*x5 + x2"))];
    for (a, f) in cases {
        let bx = a.glue_unchecked().unwrap().hull(&opts());
        let left = contract_then_glue(&a, &f);
        let (eta, z) = contracted_pair(&a.glue_unchecked().unwrap(), &f);
        assert_same(&left.eta, &eta, &bx);
        assert_same(&left.companion, &z, &bx);
    }
}

/// The two closed forms of the contracted pair share the main tensor but
/// their companions differ by a sign; the true companion follows the
/// twisted form for `k = 3` and the literal form for `k = 4`.
#[test]
fn contracted_pair_closed_forms() {
    for (a, f) in [(np3_two_chart(), e(3, "x2 + x3^2")), (np4(), e(5, "x3 - x1*x4"))] {
        let gp = a.glue_unchecked().unwrap();
        let bx = gp.hull(&opts());
        let (eta, z) = contracted_pair(&gp, &f);
        let (eta_l, z_l) = contracted_pair_literal(&gp, &f);
        let (eta_t, z_t) = contracted_pair_twisted(&gp, &f);
        assert_same(&eta, &eta_l, &bx);
        assert_same(&eta, &eta_t, &bx);
        assert!(!z.is_zero());
        assert_same(&z_l, &z_t.neg(), &bx);
        if gp.order() == 3 {
            assert_same(&z, &z_t, &bx);
        } else {
            assert_same(&z, &z_l, &bx);
        }
    }
}

#[test]
fn double_contraction_matches_cascade() {
    let a = np4();
    let (f3, f4) = (e(5, "x3 + x5^2"), e(5, "x4 - x2*x5"));
    let step = a.contract(&Fixer::Global(f4.clone()), &opts()).unwrap();
    assert_eq!(step.kind(), Kind::NambuPoisson(3));
    let twice = step.contract(&Fixer::Global(f3.clone()), &opts()).unwrap();
    assert_eq!(twice.kind(), Kind::Poisson);
    let glued = twice.glue_unchecked().unwrap();
    let gp = a.glue_unchecked().unwrap();
    let closed = cascade_contract(&gp.eta, Some(&gp.companion), &[f3, f4]).unwrap();
    let bx = gp.hull(&opts());
    assert_same(&glued.eta, &closed.lambda, &bx);
    assert_same(&glued.companion, &closed.z, &bx);
    let r = glued.verify(twice.coords(), &opts()).unwrap();
    assert!(r.passed());
}

#[test]
fn lift_examples() {
    let bx = SampleBox::unit(3);
    let flat = atlas(3, Kind::NambuPoisson(3), vec![chart("a", unit(3), mv(3, &[(&[0, 1, 2], "1")]), Expr::zero())]);
    let gp = flat.glue_unchecked().unwrap();
    let l = lift_to_4gp(&gp, &e(3, "x1*x2"), &e(3, "x3^2 + x1"), &bx).unwrap();
    assert!(l.pairs.0.z.is_zero() && l.pairs.1.z.is_zero());
    assert!(l.companion3.is_zero());
    assert!(l.report.passed());

    let gp = np3_exp(3).glue_unchecked().unwrap();
    let (h1, h2) = (e(3, "x1^2 + x2*x3"), e(3, "x2^2 - x1*x3"));
    let l = lift_to_4gp(&gp, &h1, &h2, &bx).unwrap();
    assert!(l.eta4.is_zero());
    assert!(!l.pairs.0.z.wedge(&l.pairs.1.lambda).is_zero());
    assert!(l.companion3.is_zero());
    assert!(l.report.passed(), "{:?}", l.report);

    let gp = np3_exp(4).glue_unchecked().unwrap();
    let h = (e(4, "x1*x4 + x2^2"), e(4, "x3*x4 - x1"));
    let l = lift_to_4gp(&gp, &h.0, &h.1, &SampleBox::unit(4)).unwrap();
    assert_eq!(l.report.get("lift_companion").unwrap().max_residual, 0.0);
    assert!(l.report.passed(), "{:?}", l.report);
}

/// On a non-decomposable 3-vector the lifted 4-vector is nonzero and the
/// companion relation is still an algebraic identity.
#[test]
fn lift_companion_relation_is_algebraic() {
    let eta = mv(5, &[(&[0, 1, 2], "1"), (&[2, 3, 4], "x1")]);
    let theta = Form::differential(5, &e(5, "x2 + x5"));
    let companion = conformal_atlas::companion_of(&eta, &theta);
    let gp = GlobalPair { kind: Kind::NambuJacobi(3), eta, theta, companion, pieces: vec![] };
    let l = lift_to_4gp(&gp, &e(5, "x1*x3"), &e(5, "x4 + x2^2"), &SampleBox::unit(5)).unwrap();
    assert!(!l.eta4.is_zero());
    assert!(!l.companion3.is_zero());
    assert_eq!(l.report.get("lift_companion").unwrap().max_residual, 0.0);
}

#[test]
fn atlas_documents_round_trip() {
    for a in [three_chart(None), np4(), gp4()] {
        let doc = a.to_doc();
        assert_eq!(doc.to_atlas().unwrap(), a);
    }
    let doc = conformal_atlas::AtlasDoc {
        dimension: 3,
        coordinates: vec!["x".into(), "y".into(), "z".into()],
        kind: "np".into(),
        order: 3,
        charts: vec![conformal_atlas::ChartDoc {
            name: "alpha".into(),
            bounds: unit(3),
            sigma: "x".into(),
            tensor: [("x,y,z".to_string(), "exp(2*x)".to_string())].into(),
        }],
    };
    let gp = doc.to_atlas().unwrap().glue(&opts()).unwrap();
    assert_eq!(gp.companion, mv(3, &[(&[1, 2], "-1")]));
    let mut bad = doc.clone();
    bad.charts[0].sigma = "w".into();
    assert!(bad.to_atlas().is_err());
}
