use num_complex::Complex64;
use psk::classify4d::{builtin_family, CaseId, FamilyParams};
use psk::deviance::Deviance;
use psk::lie_kahler::{curvature, levi_civita, ricci_scalar, unitary_coframe, KahlerStructure, LieAlgebra};
use psk::psk_verify::*;
use psk::PskError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn case(case: CaseId, a: f64, b: f64, delta: f64) -> KahlerStructure {
    builtin_family(case, &FamilyParams { a, b, delta }).unwrap()
}

fn lambda_coefficients(v: &PskVerdict) -> [f64; 4] {
    let l = v.d2_lambda.as_ref().expect("potential");
    [0, 1, 2, 3].map(|i| l.coefficient(&[i]).re)
}

fn assert_close(got: [f64; 4], expected: [f64; 4]) {
    for i in 0..4 {
        assert!((got[i] - expected[i]).abs() < 1e-9, "{got:?} vs {expected:?}");
    }
}

#[test]
fn case_iii_is_projective_special_kahler() {
    let ks = case(CaseId::III, SQRT2, 2.0, 1.0);
    let d = Deviance::from_real_cubic([0.0, 1.5, 0.0, 0.0]);
    let v = verify(&ks, &d).unwrap();
    assert!(v.accepted, "{v:?}");
    assert!(v.d1_residual < 1e-12);
    assert_close(lambda_coefficients(&v), [0.0, -1.0 / SQRT2, 0.0, -0.5]);
    assert!((v.scal + 3.0).abs() < 1e-12);
    assert!((v.eta_norm_sq - 3.0).abs() < 1e-12);
    assert!(v.scalar_residual < 1e-12 && v.ricci_residual < 1e-12);
    let lambda = v.d2_lambda.unwrap();
    assert!(d2_matrix_residual(&ks, &d, &lambda).unwrap() < 1e-12);
}

#[test]
fn case_iii_accepts_every_constant_phase() {
    let ks = case(CaseId::III, SQRT2, 2.0, 1.0);
    for alpha in [0.3, 1.0, 2.5, 4.0] {
        let d = Deviance::from_real_cubic([0.0, 1.5, 0.0, 0.0]).phase_rotate(alpha);
        assert!(verify(&ks, &d).unwrap().accepted, "α = {alpha}");
    }
}

#[test]
fn case_iii_with_wrong_deviance_fails_d1() {
    let ks = case(CaseId::III, SQRT2, 2.0, 1.0);
    let v = verify(&ks, &Deviance::from_real_cubic([0.0, 1.0, 0.0, 0.0])).unwrap();
    assert!(!v.accepted);
    assert_eq!(v.rejection_reason(), Some("D1 unsolvable"));
    let v = verify(&ks, &Deviance::zero(2)).unwrap();
    assert_eq!(v.rejection_reason(), Some("D1 unsolvable"));
}

#[test]
fn zero_deviance_cases_have_listed_potentials() {
    for (c, delta, expected) in [
        (CaseId::VII, 1.0f64, [0.0, 0.0, 0.0, -0.5]),
        (CaseId::VIII, 1.0, [0.0, 0.0, 0.0, -0.5]),
        (CaseId::VIII, 2.0, [0.0, 0.0, 0.0, -0.5]),
        (CaseId::IX, 1.0, [0.0, 0.0, 0.5, 0.0]),
        (CaseId::IX, 0.5, [0.0, 0.0, 0.5, 0.0]),
    ] {
        let ks = case(c, 1.0 / delta.sqrt(), 1.0, delta);
        let v = verify(&ks, &Deviance::zero(2)).unwrap();
        assert!(v.accepted, "{c} δ={delta}: {v:?}");
        assert_close(lambda_coefficients(&v), expected);
        assert!((v.scal + 6.0).abs() < 1e-12);
    }
}

#[test]
fn case_vi_fails_only_the_differential_condition() {
    let ks = case(CaseId::VI, 1.0, 1.0, 1.0);
    let d = Deviance::from_real_cubic([0.0, 0.0, 0.0, 3f64.sqrt() / 2.0]);
    let v = verify(&ks, &d).unwrap();
    assert!(v.d1_residual < 1e-12);
    assert!(!v.d2_feasible);
    assert_eq!(v.rejection_reason(), Some("D2 infeasible"));
    // No potential exists at all, and the deviance equation alone also fails.
    assert!(!d2_check(&ks, &Deviance::zero(2)).unwrap().feasible);
    assert!(!d2_deviance_only(&ks, &d).unwrap().feasible);
}

#[test]
fn d2_matrix_route_detects_wrong_potential() {
    let ks = case(CaseId::III, SQRT2, 2.0, 1.0);
    let d = Deviance::from_real_cubic([0.0, 1.5, 0.0, 0.0]);
    let wrong = psk::tensor_core::AlternatingForm::monomial(4, &[1], Complex64::new(-0.5, 0.0));
    assert!(d2_matrix_residual(&ks, &d, &wrong).unwrap() > 0.1);
}

#[test]
fn ricci_identity_on_case_iii() {
    let ks = case(CaseId::III, SQRT2, 2.0, 1.0);
    let d = Deviance::from_real_cubic([0.0, 1.5, 0.0, 0.0]);
    let (ric, scal) = ricci_scalar(&curvature(&levi_civita(&ks), &ks.alg));
    let coframe = unitary_coframe(&ks).unwrap();
    assert!(ricci_identity(&ric, &coframe, &d) < 1e-12);
    assert!(scalar_identity(scal, 2, &d) < 1e-12);
}

#[test]
fn scalar_bound_holds_with_equality_only_at_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut samples: Vec<Deviance> = (0..999)
        .map(|_| {
            let scale = 10f64.powf(rng.random_range(-6.0..1.0));
            Deviance::from_cubic([0; 4].map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale))
        })
        .collect();
    samples.push(Deviance::zero(2));
    for d in &samples {
        let scal = scalar_bound_check(2, d);
        assert!(scal >= -6.0);
        let at_bound = (scal + 6.0).abs() < 1e-12;
        assert_eq!(at_bound, d.norm_sq() < 1e-12, "‖η‖² = {:e}", d.norm_sq());
    }
}

#[test]
fn verify_requires_kahler_input() {
    let ks = KahlerStructure::standard(LieAlgebra::abelian(4).with_bracket(0, 1, &[(2, 1.0)]));
    assert!(matches!(verify(&ks, &Deviance::zero(2)), Err(PskError::Precondition(_))));
}

#[test]
fn dimension_mismatch_is_reported() {
    let ks = case(CaseId::VII, 1.0, 1.0, 1.0);
    let r = curvature(&levi_civita(&ks), &ks.alg);
    let coframe = unitary_coframe(&ks).unwrap();
    assert!(matches!(d1_residual(&r, &coframe, &Deviance::zero(3)), Err(PskError::UnsupportedDimension { .. })));
}
