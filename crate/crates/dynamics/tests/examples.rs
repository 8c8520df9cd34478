use conformal_atlas::{Chart, ConformalAtlas};
use dynamics::{
    field_of, integrate, integrate_field, run_diagnostics, DiagnosticsOptions, DynamicsError, HamiltonianSystem, Law,
};
use multivector::{Form, MultiVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalar_expr::{default_coords, parse, Expr, SampleBox};
use structures::{fix_entries, Candidate, Kind};

fn e(n: usize, s: &str) -> Expr {
    parse(s, &default_coords(n)).unwrap()
}

fn mv(n: usize, terms: &[(&[usize], &str)]) -> MultiVector {
    MultiVector::from_terms(n, terms[0].0.len(), terms.iter().map(|(i, s)| (i.to_vec(), e(n, s)))).unwrap()
}

fn oscillator() -> HamiltonianSystem {
    let c = Candidate::poisson(mv(2, &[(&[0, 1], "1")])).unwrap();
    HamiltonianSystem::new(c, vec![e(2, "(x1^2 + x2^2)/2")]).unwrap()
}

fn euler_top() -> HamiltonianSystem {
    let c = Candidate::new(Kind::NambuPoisson(3), mv(3, &[(&[0, 1, 2], "1")]), None).unwrap();
    let hs = vec![e(3, "(x1^2 + x2^2 + x3^2)/2"), e(3, "x1^2/2 + x2^2/4 + x3^2/6")];
    HamiltonianSystem::new(c, hs).unwrap()
}

fn lc_dissipation() -> HamiltonianSystem {
    let c = Candidate::jacobi(mv(2, &[(&[0, 1], "1")]), mv(2, &[(&[1], "-1")])).unwrap();
    HamiltonianSystem::new(c, vec![e(2, "(x1^2 + x2^2)/2")]).unwrap()
}

fn only(laws: &[Law]) -> DiagnosticsOptions {
    DiagnosticsOptions { laws: Some(laws.to_vec()), ..Default::default() }
}

#[test]
fn oscillator_field_and_period() {
    let sys = oscillator();
    assert_eq!(sys.vector_field(), mv(2, &[(&[0], "x2"), (&[1], "-x1")]));
    let t = integrate(&sys, &[1.0, 0.0], 2.0 * std::f64::consts::PI, 1e-3).unwrap();
    let x = t.last();
    assert!(((x[0] - 1.0).powi(2) + x[1].powi(2)).sqrt() < 1e-8, "{x:?}");
    assert!((t.time(t.len() - 1) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    let r = run_diagnostics(&sys, &t, &only(&[Law::Energy])).unwrap();
    assert!(r.get("energy_rate.H1").unwrap().max_residual < 1e-6);
    assert!(r.passed());
}

#[test]
fn zero_field_is_constant() {
    let t = integrate_field(&MultiVector::zero(3, 1), &[0.5, -1.0, 2.0], 1.0, 0.1).unwrap();
    assert_eq!(t.len(), 11);
    assert!(t.states.iter().all(|s| s == &[0.5, -1.0, 2.0]));
}

/// Nambu field of `∂₁₂₃` equals `∇H₁ × ∇H₂`.
#[test]
fn nambu_field_is_cross_product() {
    let sys = euler_top();
    let x = sys.vector_field();
    let mut g = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let p: Vec<f64> = (0..3).map(|_| g.gen_range(-2.0..2.0)).collect();
        let grad = |h: &Expr| -> Vec<f64> { (0..3).map(|i| h.diff(i).eval(&p).unwrap()).collect() };
        let (a, b) = (grad(&sys.hamiltonians()[0]), grad(&sys.hamiltonians()[1]));
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        for i in 0..3 {
            assert!((x.component(i).eval(&p).unwrap() - cross[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn jacobi_without_bivector() {
    let c = Candidate::jacobi(MultiVector::zero(2, 2), mv(2, &[(&[0], "x2"), (&[1], "1")])).unwrap();
    let sys = HamiltonianSystem::new(c, vec![e(2, "x1 + x2^2")]).unwrap();
    assert_eq!(sys.vector_field(), mv(2, &[(&[0], "-x1*x2 - x2^3"), (&[1], "-x1 - x2^2")]));
}

fn euler_rhs(m: &[f64]) -> [f64; 3] {
    let (i1, i2, i3) = (1.0, 2.0, 3.0);
    [m[1] * m[2] * (1.0 / i3 - 1.0 / i2), m[2] * m[0] * (1.0 / i1 - 1.0 / i3), m[0] * m[1] * (1.0 / i2 - 1.0 / i1)]
}

#[test]
fn euler_top_matches_textbook_equations() {
    let sys = euler_top();
    let t = integrate(&sys, &[1.0, 0.1, 0.1], 10.0, 1e-3).unwrap();
    let h = 1e-3;
    let mut m = [1.0, 0.1, 0.1];
    for i in 1..t.len() {
        let k1 = euler_rhs(&m);
        let s = |k: &[f64; 3], a: f64| [m[0] + a * k[0], m[1] + a * k[1], m[2] + a * k[2]];
        let k2 = euler_rhs(&s(&k1, h / 2.0));
        let k3 = euler_rhs(&s(&k2, h / 2.0));
        let k4 = euler_rhs(&s(&k3, h));
        for j in 0..3 {
            m[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        for j in 0..3 {
            assert!((t.states[i][j] - m[j]).abs() < 1e-12);
        }
    }
    let r = run_diagnostics(&sys, &t, &DiagnosticsOptions::default()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.get("drift.H1").unwrap().max_residual < 1e-6);
    assert!(r.get("drift.H2").unwrap().max_residual < 1e-6);
    assert!(r.get("bi_hamiltonian_flow").unwrap().max_residual < 1e-10);
    assert_eq!(r.get("eta_preservation").unwrap().max_residual, 0.0);

    let hs = sys.hamiltonians();
    let (_, _, pr) = fix_entries(sys.candidate().eta(), &hs[0], &hs[1], &SampleBox::unit(3)).unwrap();
    assert!(pr.passed());
}

#[test]
fn lc_dissipation_rate() {
    let sys = lc_dissipation();
    assert_eq!(sys.companion_part().derivative_of(&sys.hamiltonians()[0]), e(2, "x1^2*x2/2 + x2^3/2"));
    let t = integrate(&sys, &[0.5, 0.3], 2.0, 1e-3).unwrap();
    let r = run_diagnostics(&sys, &t, &DiagnosticsOptions::default()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.get("energy_rate.H1").unwrap().max_residual < 1e-5);
    assert_eq!(r.get("energy_identity.H1").unwrap().max_residual, 0.0);
    assert!(r.get("drift.H1").is_none());
}

#[test]
fn homomorphism_for_binary_brackets() {
    let so3 = mv(3, &[(&[0, 1], "x3"), (&[1, 2], "x1"), (&[0, 2], "-x2")]);
    let p = HamiltonianSystem::new(Candidate::poisson(so3).unwrap(), vec![e(3, "x1*x2 + x3^2")]).unwrap();
    let j = lc_dissipation();
    for (sys, f) in [(p, e(3, "x1^2 - x2*x3")), (j, e(2, "x1*x2 + x2^3"))] {
        let t = integrate(&sys, &vec![0.1; sys.dim()], 0.01, 1e-3).unwrap();
        let opts = DiagnosticsOptions { partners: Some(vec![f]), laws: Some(vec![Law::Homomorphism]), ..Default::default() };
        let r = run_diagnostics(&sys, &t, &opts).unwrap();
        assert_eq!(r.get("homomorphism").unwrap().max_residual, 0.0, "{r:?}");
    }
}

#[test]
fn bracket_conservation_along_nambu_flow() {
    let sys = euler_top();
    let t = integrate(&sys, &[1.0, 0.1, 0.1], 1.0, 1e-3).unwrap();
    let opts = DiagnosticsOptions {
        bracket_tuple: Some(vec![e(3, "x1*x2"), e(3, "x3"), e(3, "x1 + x2^2")]),
        laws: Some(vec![Law::BracketConservation]),
        ..Default::default()
    };
    let r = run_diagnostics(&sys, &t, &opts).unwrap();
    assert!(r.get("bracket_conservation").unwrap().max_residual < 1e-6, "{r:?}");
}

#[test]
fn nambu_jacobi_laws() {
    let eta = mv(3, &[(&[0, 1, 2], "1 + x2^2")]);
    let theta = Form::differential(3, &e(3, "x1 + x3"));
    let companion = conformal_atlas::companion_of(&eta, &theta);
    let c = Candidate::new(Kind::NambuJacobi(3), eta, Some(companion)).unwrap();
    let sys = HamiltonianSystem::new(c, vec![e(3, "x1*x2 + x3"), e(3, "x2^2 - x1*x3")]).unwrap();
    let t = integrate(&sys, &[0.2, 0.1, -0.1], 1.0, 1e-3).unwrap();
    let r = run_diagnostics(&sys, &t, &DiagnosticsOptions::default()).unwrap();
    for name in ["bi_hamiltonian_identity", "bi_hamiltonian_flow", "energy_identity.H1", "energy_identity.H2"] {
        assert!(r.get(name).unwrap().pass, "{name}: {r:?}");
    }
    assert_eq!(r.get("nj_consistency_eta").unwrap().max_residual, 0.0);
    assert_eq!(r.get("nj_consistency_companion").unwrap().max_residual, 0.0);
    assert!(r.get("drift.H1").is_none());
}

#[test]
fn locally_conformal_field_is_glued_local_field() {
    let n = 3;
    let sigma = e(n, "x1 + x2*x3");
    let t = mv(n, &[(&[0, 1, 2], "(2 + x3)*exp(2*(x1 + x2*x3))")]);
    let atlas = ConformalAtlas::new(
        default_coords(n),
        Kind::NambuPoisson(3),
        vec![Chart::new("alpha", vec![[-1.0, 1.0]; 3], t.clone(), sigma.clone())],
    )
    .unwrap();
    let gp = atlas.glue_unchecked().unwrap();
    let hs = vec![e(n, "x1*x3 + x2"), e(n, "x2^2 + 1")];
    let sys = HamiltonianSystem::from_global(&gp, hs.clone()).unwrap();
    assert_eq!(sys.vector_field(), field_of(&gp.eta, Some(&gp.companion), &hs));
    let damp = sigma.neg().exp();
    let local: Vec<Expr> = hs.iter().map(|h| h.mul(&damp)).collect();
    let v = sys.vector_field().check_equal(&field_of(&t, None, &local), &SampleBox::unit(n)).unwrap();
    assert!(v.is_equal(), "{v:?}");
}

#[test]
fn errors() {
    let c = Candidate::poisson(mv(2, &[(&[0, 1], "1")])).unwrap();
    assert!(matches!(
        HamiltonianSystem::new(c.clone(), vec![]),
        Err(DynamicsError::HamiltonianCount { expected: 1, got: 0, .. })
    ));
    let sys = oscillator();
    let t = integrate(&sys, &[1.0, 0.0], 0.1, 1e-2).unwrap();
    assert!(matches!(
        run_diagnostics(&sys, &t, &only(&[Law::Homomorphism])),
        Err(DynamicsError::MissingAuxiliary("homomorphism"))
    ));
    assert!(matches!(run_diagnostics(&sys, &t, &only(&[Law::FlowAgreement])), Err(DynamicsError::NotApplicable { .. })));
    let blow = MultiVector::vector(1, [e(1, "x1^2")]);
    assert!(matches!(integrate_field(&blow, &[1.0], 2.0, 1e-3), Err(DynamicsError::BlowUp { .. })));
    let boxed = oscillator().with_bounds(vec![[-1.0, 1.0]; 2]);
    assert!(matches!(integrate(&boxed, &[2.0, 0.0], 1.0, 0.1), Err(DynamicsError::OutsideBox)));
}

#[test]
fn csv_output() {
    let t = integrate_field(&MultiVector::zero(2, 1), &[1.0, 0.5], 0.2, 0.1).unwrap();
    assert_eq!(t.to_csv(), "t,x1,x2\n0,1,0.5\n0.1,1,0.5\n0.2,1,0.5\n");
}
