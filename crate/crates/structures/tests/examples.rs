mod common;

use common::*;
use multivector::MultiVector;
use scalar_expr::{check_zero, Expr, SampleBox};
use structures::{
    cascade_contract, cascade_stepwise, fix_entries, fundamental_identity_residual, jacobi_identities, make_bracket,
    verify, Candidate, FunctionFamily, Kind, StructureError,
};

#[test]
fn bracket_examples() {
    let p = Candidate::poisson(basis(2, &[0, 1], Expr::one())).unwrap();
    assert_eq!(make_bracket(&p).eval(&[e(2, "x1"), e(2, "x2")]).unwrap(), Expr::one());

    let j = Candidate::jacobi(MultiVector::zero(2, 2), basis(2, &[0], Expr::one())).unwrap();
    let b = make_bracket(&j);
    let (f, h) = (e(2, "x1^2*x2"), e(2, "x2 + x1"));
    let expected = &f * h.diff(0) - &h * f.diff(0);
    assert_eq!(b.eval(&[f, h]).unwrap(), expected);
    assert_eq!(b.eval(&[Expr::one(), e(2, "x1")]).unwrap(), Expr::one());

    let nj = Candidate::new(
        Kind::NambuJacobi(3),
        basis(3, &[0, 1, 2], Expr::one()),
        Some(basis(3, &[1, 2], Expr::int(-1))),
    )
    .unwrap();
    assert_eq!(make_bracket(&nj).eval(&[Expr::one(), e(3, "x2"), e(3, "x3")]).unwrap(), Expr::int(-1));
    assert!(matches!(make_bracket(&nj).eval(&[Expr::one()]), Err(StructureError::Arity { expected: 3, got: 1 })));
}

#[test]
fn candidate_invariants() {
    let b = basis(3, &[0, 1], Expr::one());
    assert!(matches!(Candidate::new(Kind::Jacobi, b.clone(), None), Err(StructureError::MissingCompanion(_))));
    assert!(matches!(
        Candidate::new(Kind::Poisson, b.clone(), Some(basis(3, &[0], Expr::one()))),
        Err(StructureError::UnexpectedCompanion(_))
    ));
    assert!(matches!(Candidate::new(Kind::NambuPoisson(3), b.clone(), None), Err(StructureError::MainOrder { .. })));
    assert!(matches!(Candidate::new(Kind::GeneralizedPoisson(3), b, None), Err(StructureError::OddOrder(3))));
}

#[test]
fn verify_examples() {
    let fam = FunctionFamily::with_default(3, 11);
    let so3 = Candidate::poisson(so3()).unwrap();
    assert!(verify(&so3, &fam, &SampleBox::unit(3)).unwrap().passed());

    let l = basis(4, &[0, 1], e(4, "exp(-x1)")).add(&basis(4, &[2, 3], e(4, "exp(-x1)")));
    let z = basis(4, &[1], e(4, "-exp(-x1)"));
    let jac = Candidate::jacobi(l, z).unwrap();
    let r = verify(&jac, &FunctionFamily::with_default(4, 11), &SampleBox::unit(4)).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.identities.len(), 2);
}

#[test]
fn sum_of_trivectors_is_not_nambu() {
    let c = Candidate::new(Kind::NambuPoisson(3), r6(), None).unwrap();
    let r = verify(&c, &FunctionFamily::with_default(6, 11), &SampleBox::unit(6)).unwrap();
    assert!(!r.passed());
    let fi = r.get("fundamental_identity").unwrap();
    assert!(!fi.pass && fi.max_residual > 1e-3, "{fi:?}");
    let w = fi.witness.as_ref().unwrap();
    assert_eq!(w.point.len(), 6);
    assert_eq!(w.inputs.len(), 5);
    assert!(!r.get("np_contraction_poisson").unwrap().pass);
}

#[test]
fn fundamental_identity_values() {
    let n = 3;
    let canonical = make_bracket(&Candidate::new(Kind::NambuPoisson(3), basis(n, &[0, 1, 2], Expr::one()), None).unwrap());
    let fs = [e(n, "x1"), e(n, "x2^2"), e(n, "x1*x3"), e(n, "x3"), e(n, "x2*x3 + x1^2")];
    assert!(fundamental_identity_residual(&canonical, &fs).unwrap().is_zero());

    let poisson = make_bracket(&Candidate::poisson(basis(2, &[0, 1], Expr::one())).unwrap());
    let fs = [e(2, "x1^2"), e(2, "x1*x2"), e(2, "x2^2 + x1")];
    assert!(fundamental_identity_residual(&poisson, &fs).unwrap().is_zero());
    assert!(matches!(
        fundamental_identity_residual(&poisson, &fs[..2]),
        Err(StructureError::Arity { expected: 3, got: 2 })
    ));

    let b = make_bracket(&Candidate::new(Kind::NambuPoisson(3), r6(), None).unwrap());
    let c = |s: &str| e(6, s);
    // linear entries make every inner bracket constant, so the identity holds
    let linear = [c("x1"), c("x2"), c("x3"), c("x4"), c("x5")];
    assert!(fundamental_identity_residual(&b, &linear).unwrap().is_zero());
    let with_product = [c("x1"), c("x2"), c("x3"), c("x4"), c("x4*x5")];
    assert!(fundamental_identity_residual(&b, &with_product).unwrap().is_zero());
    // a coupling product across the two blocks breaks it
    let coupled = [c("x1*x4"), c("x2"), c("x5"), c("x3"), c("x6")];
    assert_eq!(fundamental_identity_residual(&b, &coupled).unwrap(), Expr::int(-1));
}

#[test]
fn cascade_examples() {
    let eta = basis(3, &[0, 1, 2], Expr::one());
    let p = cascade_contract(&eta, None, &[e(3, "x3")]).unwrap();
    assert_eq!(p.lambda, basis(3, &[0, 1], Expr::one()));
    assert!(p.z.is_zero());
    let p = cascade_contract(&eta, None, &[Expr::one()]).unwrap();
    assert!(p.lambda.is_zero() && p.z.is_zero());
    assert!(matches!(cascade_contract(&eta, None, &[]), Err(StructureError::Arity { expected: 1, got: 0 })));

    let eta = basis(3, &[0, 1, 2], e(3, "exp(-2*x1)"));
    let ec = basis(3, &[1, 2], e(3, "-exp(-2*x1)"));
    let p = cascade_contract(&eta, Some(&ec), &[e(3, "x3")]).unwrap();
    // Λ = ι_{dx3}η + x3 𝓔, Z = ι_{dx3}𝓔
    let lambda = basis(3, &[0, 1], e(3, "exp(-2*x1)")).add(&basis(3, &[1, 2], e(3, "-x3*exp(-2*x1)")));
    assert_eq!(p.lambda, lambda);
    assert_eq!(p.z, basis(3, &[1], e(3, "-exp(-2*x1)")));
    assert!(jacobi_identities(&p, &SampleBox::unit(3)).unwrap().passed());
    assert_eq!(p, cascade_stepwise(&eta, Some(&ec), &[e(3, "x3")]).unwrap());
}

#[test]
fn fix_entries_examples() {
    let bx = SampleBox::unit(3);
    let eta = basis(3, &[0, 1, 2], Expr::one());
    let (l1, l2, r) = fix_entries(&eta, &e(3, "x1"), &Expr::int(5), &bx).unwrap();
    assert_eq!(l1, basis(3, &[1, 2], Expr::int(-1)));
    assert!(l2.is_zero());
    assert!(r.passed());

    let h1 = e(3, "(x1^2 + x2^2 + x3^2)/2");
    let h2 = e(3, "x1^2/2 + x2^2/4 + x3^2/6");
    let (l1, l2, r) = fix_entries(&eta, &h1, &h2, &bx).unwrap();
    assert!(r.passed());
    for name in ["lambda1_poisson", "lambda2_poisson", "lambda1_lambda2_compatible"] {
        assert_eq!(r.get(name).unwrap().max_residual, 0.0, "{name}");
    }
    assert!(l1.sn_bracket(&l2).is_zero());
}

#[test]
fn nambu_jacobi_fixtures_verify() {
    let (eta, c) = nj3();
    let cand = Candidate::new(Kind::NambuJacobi(3), eta, Some(c)).unwrap();
    let r = verify(&cand, &FunctionFamily::with_default(3, 5), &SampleBox::unit(3)).unwrap();
    assert!(r.passed(), "{r:?}");
    let (eta, c) = nj4();
    let cand = Candidate::new(Kind::NambuJacobi(4), eta, Some(c)).unwrap();
    let r = verify(&cand, &FunctionFamily::with_default(5, 5), &SampleBox::unit(5)).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn inconsistent_companions_are_detected() {
    // reversing Z amounts to the Lee form −dx1, whose local bivector e^{−2x1}(∂12+∂34) is not Poisson
    let l = basis(4, &[0, 1], e(4, "exp(-x1)")).add(&basis(4, &[2, 3], e(4, "exp(-x1)")));
    let z = basis(4, &[1], e(4, "exp(-x1)"));
    let r = verify(&Candidate::jacobi(l, z).unwrap(), &FunctionFamily::with_default(4, 1), &SampleBox::unit(4)).unwrap();
    assert!(!r.get("jacobi_lambda").unwrap().pass);

    // companion built from a non-closed one-form x2 dx1 + dx3
    let (eta, _) = nj3();
    let theta = multivector::Form::from_terms(3, 1, [(vec![0], e(3, "x2")), (vec![2], Expr::one())]).unwrap();
    let bad = eta.contract(&theta).neg();
    let cand = Candidate::new(Kind::NambuJacobi(3), eta, Some(bad)).unwrap();
    let r = verify(&cand, &FunctionFamily::with_default(3, 5), &SampleBox::unit(3)).unwrap();
    assert!(!r.passed());
    assert!(r.failures().any(|(k, _)| k.starts_with("nj_cascade")));
    assert!(check_zero(&[Expr::zero()], &SampleBox::unit(3)).unwrap().is_equal());
}
