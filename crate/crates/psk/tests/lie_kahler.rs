use nalgebra::DMatrix;
use num_complex::Complex64;
use psk::classify4d::{builtin_family, curvature_fit, CaseId, FamilyParams};
use psk::deviance::{model_curvature, projective_blocks, ModelKind};
use psk::lie_kahler::*;
use psk::tensor_core::FormMatrix;
use psk::PskError;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn params(a: f64, b: f64, delta: f64) -> FamilyParams {
    FamilyParams { a, b, delta }
}

/// `[u¹, u², u³, u⁴]` coefficients of a real connection entry.
fn entry(conn: &FormMatrix<Complex64>, i: usize, j: usize) -> [f64; 4] {
    [0, 1, 2, 3].map(|k| conn.get(i, j).coefficient(&[k]).re)
}

fn assert_connection(conn: &FormMatrix<Complex64>, expected: [[[f64; 4]; 4]; 4]) {
    for i in 0..4 {
        for j in 0..4 {
            let got = entry(conn, i, j);
            for k in 0..4 {
                assert!((got[k] - expected[i][j][k]).abs() < 1e-12, "entry ({},{}) = {:?}, expected {:?}", i + 1, j + 1, got, expected[i][j]);
            }
        }
    }
}

const O: [f64; 4] = [0.0; 4];
fn u(k: usize, c: f64) -> [f64; 4] {
    let mut v = [0.0; 4];
    v[k - 1] = c;
    v
}
fn sum(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[test]
fn every_family_is_a_kahler_lie_algebra() {
    for case in CaseId::ALL {
        for delta in [0.5, 1.0, 2.0] {
            let ks = builtin_family(case, &params(1.3, 0.7, delta)).unwrap();
            assert!(ks.alg.jacobi_residual() < 1e-12, "{case}");
            let report = ks.kahler_check();
            assert!(report.passes(1e-12), "{case}: {report:?}");
            let conn = levi_civita(&ks);
            assert!(torsion_residual(&conn, &ks.alg.complex_constants()) < 1e-12);
            assert!(metric_residual(&conn) < 1e-12);
        }
    }
}

#[test]
fn non_kahler_structure_is_detected() {
    // Heisenberg-type bracket [e1,e2] = e3 with the standard I: dω ≠ 0.
    let alg = LieAlgebra::abelian(4).with_bracket(0, 1, &[(2, 1.0)]);
    let ks = KahlerStructure::standard(alg);
    let report = ks.kahler_check();
    assert!(!report.closed_ok);
    assert!(report.d_omega > 0.5);
}

#[test]
fn table_3_curvatures() {
    // (case, params, h1, h2, proj)
    let rows = [
        (CaseId::I, params(1.0, 1.0, 1.0), 1.0, 0.0, 0.0),
        (CaseId::II, params(1.0, 1.0, 1.0), 0.0, 0.0, 0.0),
        (CaseId::III, params(SQRT2, 2.0, 1.0), 2.0, 4.0, 0.0),
        (CaseId::III, params(1.0, 3.0, 1.0), 1.0, 9.0, 0.0),
        (CaseId::IV, params(1.0, 1.0, 2.0), 1.0, 0.0, 0.0),
        (CaseId::V, params(1.0, 1.0, 0.5), 1.0, 0.0, 0.0),
        (CaseId::VI, params(1.0, 1.0, 1.0), 0.0, -6.0, -1.0),
        (CaseId::VI, params(2.0, 1.0, 1.0), 0.0, -24.0, -4.0),
        (CaseId::VII, params(1.0, 1.0, 1.0), 0.0, 0.0, -1.0),
        (CaseId::VII, params(0.5, 1.0, 1.0), 0.0, 0.0, -0.25),
        (CaseId::VIII, params(1.0, 1.0, 0.5), 0.0, 0.0, -0.5),
        (CaseId::VIII, params(1.0, 1.0, 2.0), 0.0, 0.0, -2.0),
        (CaseId::IX, params(2.0, 1.0, 0.5), 0.0, 0.0, -2.0),
    ];
    for (case, p, h1, h2, proj) in rows {
        let ks = builtin_family(case, &p).unwrap();
        let fit = curvature_fit(&curvature(&levi_civita(&ks), &ks.alg));
        assert!(fit.residual < 1e-9, "{case}: {fit:?}");
        assert!((fit.h1 - h1).abs() < 1e-9 && (fit.h2 - h2).abs() < 1e-9 && (fit.proj - proj).abs() < 1e-9, "{case} {p:?}: {fit:?}");
    }
}

#[test]
fn table_4_case_iii() {
    let ks = builtin_family(CaseId::III, &params(SQRT2, 2.0, 1.0)).unwrap();
    assert_connection(
        &levi_civita(&ks),
        [[O, u(2, SQRT2), O, O], [u(2, -SQRT2), O, O, O], [O, O, O, u(4, 2.0)], [O, O, u(4, -2.0), O]],
    );
}

#[test]
fn table_4_case_vi() {
    let ks = builtin_family(CaseId::VI, &params(1.0, 1.0, 1.0)).unwrap();
    assert_connection(
        &levi_civita(&ks),
        [
            [O, u(1, -2.0), u(4, 1.0), u(3, 1.0)],
            [u(1, 2.0), O, u(3, -1.0), u(4, 1.0)],
            [u(4, -1.0), u(3, 1.0), O, u(1, -1.0)],
            [u(3, -1.0), u(4, -1.0), u(1, 1.0), O],
        ],
    );
}

#[test]
fn table_4_case_vii_with_antisymmetric_entries() {
    // Entries (3,2) and (4,2) are the antisymmetric partners of (2,3), (2,4).
    let ks = builtin_family(CaseId::VII, &params(1.0, 1.0, 1.0)).unwrap();
    assert_connection(
        &levi_civita(&ks),
        [
            [O, u(4, 1.0), u(1, -1.0), u(2, 1.0)],
            [u(4, -1.0), O, u(2, -1.0), u(1, -1.0)],
            [u(1, 1.0), u(2, 1.0), O, u(4, 2.0)],
            [u(2, -1.0), u(1, 1.0), u(4, -2.0), O],
        ],
    );
}

#[test]
fn table_4_case_viii() {
    let ks = builtin_family(CaseId::VIII, &params(1.0, 1.0, 1.0)).unwrap();
    assert_connection(
        &levi_civita(&ks),
        [
            [O, sum(u(3, 2.0), u(4, 1.0)), u(1, -1.0), u(2, 1.0)],
            [sum(u(3, -2.0), u(4, -1.0)), O, u(2, -1.0), u(1, -1.0)],
            [u(1, 1.0), u(2, 1.0), O, u(4, 2.0)],
            [u(2, -1.0), u(1, 1.0), u(4, -2.0), O],
        ],
    );
}

#[test]
fn table_4_case_ix() {
    let ks = builtin_family(CaseId::IX, &params(1.0, 1.0, 1.0)).unwrap();
    assert_connection(
        &levi_civita(&ks),
        [
            [O, sum(u(4, -2.0), u(3, -1.0)), u(2, -1.0), u(1, -1.0)],
            [sum(u(4, 2.0), u(3, 1.0)), O, u(1, 1.0), u(2, -1.0)],
            [u(2, 1.0), u(1, -1.0), O, u(3, -2.0)],
            [u(1, 1.0), u(2, 1.0), u(3, 2.0), O],
        ],
    );
}

#[test]
fn hyperbolic_plane_calibrates_curvature_sign() {
    let alg = LieAlgebra::abelian(4).with_bracket(0, 1, &[(1, 1.0)]);
    let ks = KahlerStructure::standard(alg);
    let r = curvature(&levi_civita(&ks), &ks.alg);
    let fit = curvature_fit(&r);
    assert!((fit.h1 - 1.0).abs() < 1e-12 && fit.h2.abs() < 1e-12 && fit.proj.abs() < 1e-12);
}

#[test]
fn curvature_tensors_satisfy_bianchi_and_antisymmetry() {
    for case in CaseId::ALL {
        let ks = builtin_family(case, &params(0.8, 1.7, 1.4)).unwrap();
        let r = curvature(&levi_civita(&ks), &ks.alg);
        assert!(r.bianchi_residual() < 1e-12, "{case}");
        assert!(r.antisymmetry_residual() < 1e-12, "{case}");
    }
}

#[test]
fn projective_space_has_einstein_constant_two_n_plus_two() {
    for n in 1..=3 {
        let r = projective_blocks(n).realify_standard();
        let (ric, scal) = ricci_scalar(&r);
        let expected = 2.0 * (n as f64 + 1.0);
        assert!((&ric - DMatrix::identity(2 * n, 2 * n) * expected).amax() < 1e-12, "n = {n}");
        assert!((scal - expected).abs() < 1e-12);
    }
}

#[test]
fn scalar_curvatures_of_accepted_cases() {
    let scal_of = |case, p| {
        let ks = builtin_family(case, &p).unwrap();
        ricci_scalar(&curvature(&levi_civita(&ks), &ks.alg)).1
    };
    assert!((scal_of(CaseId::III, params(SQRT2, 2.0, 1.0)) + 3.0).abs() < 1e-12);
    assert!((scal_of(CaseId::VII, params(1.0, 1.0, 1.0)) + 6.0).abs() < 1e-12);
    assert!((scal_of(CaseId::IX, params(1.0 / 3f64.sqrt(), 1.0, 3.0)) + 6.0).abs() < 1e-12);
}

#[test]
fn complexify_and_realify_round_trip() {
    let coframe = UnitaryCoframe::standard(4);
    for case in CaseId::ALL {
        let ks = builtin_family(case, &params(1.1, 0.9, 0.6)).unwrap();
        let r = curvature(&levi_civita(&ks), &ks.alg);
        let blocks = r.complexify(&coframe).unwrap();
        assert!(blocks.hermitian_residual() < 1e-12, "{case}");
        let back = blocks.realify(&coframe);
        assert!((&(back.real().clone()) - r.real()).max_abs() < 1e-12, "{case}");
    }
}

#[test]
fn model_blocks_match_documented_values() {
    let h1 = model_curvature(ModelKind::H1).complexify(&UnitaryCoframe::standard(4)).unwrap();
    // H₁ lives in the θ̄¹∧θ¹ block, acting on the first coordinate.
    assert!((h1.get(0, 0)[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    assert!(h1.get(1, 1).camax() < 1e-12 && h1.get(0, 1).camax() < 1e-12);
    let p = model_curvature(ModelKind::Projective(2)).complexify(&UnitaryCoframe::standard(4)).unwrap();
    assert!((p.get(0, 0)[(0, 0)] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
    assert!((p.get(0, 1)[(1, 0)] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn curvature_not_commuting_with_i_is_rejected() {
    let mut real = FormMatrix::zeros(4, 4, 4, 2);
    let f = psk::tensor_core::AlternatingForm::monomial(4, &[0, 2], Complex64::new(1.0, 0.0));
    real.set(0, 2, -&f);
    real.set(2, 0, f);
    let r = CurvatureTensor::from_real(real);
    assert!(matches!(r.complexify(&UnitaryCoframe::standard(4)), Err(PskError::NotKahlerCurvature(_))));
}

#[test]
fn unitary_coframe_reorders_permuted_frames() {
    // I e1 = e3, I e2 = e4.
    let mut imat = DMatrix::zeros(4, 4);
    imat[(2, 0)] = 1.0;
    imat[(0, 2)] = -1.0;
    imat[(3, 1)] = 1.0;
    imat[(1, 3)] = -1.0;
    let ks = KahlerStructure::new(LieAlgebra::abelian(4), imat);
    let coframe = unitary_coframe(&ks).unwrap();
    assert!(!coframe.is_standard());
    assert_eq!(coframe.order, vec![0, 2, 1, 3]);
    assert!(ks.kahler_check().passes(1e-12));
}

#[test]
fn non_adapted_complex_structure_is_rejected() {
    let s = 0.5f64.sqrt();
    let mut imat = DMatrix::zeros(2, 2);
    imat[(1, 0)] = 1.0;
    imat[(0, 1)] = -1.0;
    let rot = nalgebra::Matrix2::new(s, -s, s, s);
    let r = DMatrix::from_fn(2, 2, |i, j| rot[(i, j)]);
    let imat = &r * imat * r.transpose() + DMatrix::from_element(2, 2, 0.1);
    let ks = KahlerStructure::new(LieAlgebra::abelian(2), imat);
    assert!(matches!(unitary_coframe(&ks), Err(PskError::FrameNotAdapted)));
}
