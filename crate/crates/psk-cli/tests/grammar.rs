use num_complex::Complex64;
use psk::classify4d::{builtin_family, CaseId, FamilyParams};
use psk::lie_kahler::{KahlerStructure, LieAlgebra};
use psk_cli::grammar::{parse_algebra, parse_bindings, Bindings, ParseError};
use psk_cli::render;

const CASE_III: &str = "\
# comment line
[params]
a = sqrt(2)
b = 2   # trailing comment
[algebra]
dim = 4
(1,2) -> a*e2
(3,4) -> b*e_4
[complex]
e1 -> e2
e3 -> e4
[deviance]
c2 = 3/2
[lambda]
lambda = -1/sqrt(2)*u2 - 1/2*u4
";

fn parse(text: &str) -> Result<psk_cli::grammar::AlgebraFile, ParseError> {
    parse_algebra(text, &Bindings::new())
}

fn parse_error(text: &str) -> ParseError {
    parse(text).expect_err("should not parse")
}

pub fn structure_distance(x: &KahlerStructure, y: &KahlerStructure) -> f64 {
    let d = x.dim();
    assert_eq!(d, y.dim());
    let mut worst: f64 = (&x.imat - &y.imat).abs().max();
    worst = worst.max((&x.omega - &y.omega).max_abs());
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((x.alg.get(k, i, j) - y.alg.get(k, i, j)).abs());
            }
        }
    }
    worst
}

#[test]
fn case_iii_file_matches_the_builtin_family() {
    let file = parse(CASE_III).unwrap();
    let expected = builtin_family(CaseId::III, &FamilyParams { a: std::f64::consts::SQRT_2, b: 2.0, delta: 1.0 }).unwrap();
    assert!(structure_distance(&file.structure, &expected) < 1e-15);
    let cubic = file.deviance.unwrap().cubic().unwrap();
    assert_eq!(cubic[1], Complex64::new(1.5, 0.0));
    assert_eq!(render::form(&file.lambda.unwrap(), 'u'), "-0.707106781187*u2 - 0.5*u4");
}

#[test]
fn command_line_bindings_override_file_parameters() {
    let bindings = parse_bindings(&["a=1".into(), "b=2*a + 1".into()]).unwrap();
    assert_eq!(bindings["b"], Complex64::new(3.0, 0.0));
    let file = parse_algebra(CASE_III, &bindings).unwrap();
    let expected = builtin_family(CaseId::III, &FamilyParams { a: 1.0, b: 3.0, delta: 1.0 }).unwrap();
    assert!(structure_distance(&file.structure, &expected) < 1e-15);
    assert!(parse_bindings(&["novalue".into()]).is_err());
}

#[test]
fn empty_brackets_give_the_abelian_algebra() {
    let file = parse("[algebra]\ndim = 4\n").unwrap();
    assert_eq!(file.structure, KahlerStructure::standard(LieAlgebra::abelian(4)));
    assert!(file.structure.kahler_check().passes(1e-9));
    assert!(file.deviance.is_none() && file.lambda.is_none());
}

#[test]
fn non_closed_kahler_form_fails_validation() {
    let file = parse("[algebra]\ndim = 4\n(1,2) -> 1.0*e3\n").unwrap();
    assert_eq!(file.structure.alg.jacobi_residual(), 0.0);
    let report = file.structure.kahler_check();
    assert!(!report.passes(1e-9));
    assert!(report.d_omega > 0.5);
}

#[test]
fn complex_structure_completion() {
    let file = parse("[algebra]\ndim = 4\n[complex]\ne1 -> e3\ne2 -> -e4\n").unwrap();
    let i = &file.structure.imat;
    assert_eq!((i[(2, 0)], i[(0, 2)], i[(3, 1)], i[(1, 3)]), (1.0, -1.0, -1.0, 1.0));
    assert!(file.structure.kahler_check().passes(1e-9));
    let e = parse_error("[algebra]\ndim = 4\n[complex]\ne1 -> e2\n");
    assert!(e.message.contains("undetermined"), "{e}");
    let e = parse_error("[algebra]\ndim = 4\n[complex]\ne1 -> e2\ne2 -> e1\ne3 -> e4\n");
    assert!(e.message.contains("contradicts"), "{e}");
}

#[test]
fn omega_override_is_checked_for_compatibility() {
    let file = parse("[algebra]\ndim = 2\n[omega]\nomega = 2*u1^u2\n").unwrap();
    assert!(file.structure.kahler_check().compat > 0.5);
    let file = parse("[algebra]\ndim = 2\n[omega]\nomega = u1^u2\n").unwrap();
    assert!(file.structure.kahler_check().passes(1e-9));
}

#[test]
fn expressions() {
    let file = parse("[params]\nt = 1e-1 * 20\ns = sqrt(t^2)\n[algebra]\ndim = 2\n(1,2) -> (s + i - i)/4 * e2 - -e2\n").unwrap();
    assert_eq!(file.structure.alg.get(1, 0, 1), 1.5);
    let file = parse("[algebra]\ndim = 2\n(1,2) -> 2·e2\n").unwrap();
    assert_eq!(file.structure.alg.get(1, 0, 1), 2.0);
}

#[test]
fn errors_carry_line_and_column() {
    let cases = [
        ("[algebra]\ndim = 4\n(1,2) -> c*e2\n", 3, 10, "unbound parameter `c`"),
        ("[algebra]\ndim = 4\n(1,2) -> e2\n(2,1) -> e1\n", 4, 1, "defined twice"),
        ("[algebra]\ndim = 4\n(1,5) -> e2\n", 3, 2, "not in 1..4"),
        ("[algebra]\ndim = 4\n(1,2) -> e7\n", 3, 10, "out of range"),
        ("[algebra]\ndim = 4\n(1,2) -> e2 +\n", 3, 14, "unexpected end"),
        ("[algebra]\ndim = 4\n  (1,2) -> e2 $ e3\n", 3, 15, "unexpected character"),
        ("[algebra]\ndim = 4\n(1,2) -> e1^e2\n", 3, 10, "expected a 1-form"),
        ("[algebra]\ndim = 4\n(1,2) -> e1*e2\n", 3, 12, "use `^`"),
        ("[algebra]\ndim = 4\n(1,2) -> u1\n", 3, 10, "not allowed"),
        ("[algebra]\ndim = 3\n", 2, 7, "positive even"),
        ("[bogus]\n", 1, 2, "unknown section"),
        ("dim = 4\n", 1, 1, "before the first section"),
        ("[params]\na = 1\n", 1, 1, "missing [algebra]"),
        ("[algebra]\ndim = 2\n[deviance]\nc1 = 1\n", 4, 1, "dimension 4"),
        ("[algebra]\ndim = 4\n[deviance]\nc5 = 1\n", 4, 1, "expected c1..c4"),
        ("[algebra]\ndim = 4\n[lambda]\nlambda = u1^u2\n", 4, 10, "expected a 1-form"),
        ("[params]\na = (1\n[algebra]\ndim = 2\n", 2, 7, "expected `)`"),
        ("[params]\na = 1/0\n[algebra]\ndim = 2\n", 2, 6, "division by zero"),
    ];
    for (text, line, column, fragment) in cases {
        let e = parse_error(text);
        assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
        assert!(e.message.contains(fragment), "{text:?}: {e}");
    }
}

#[test]
fn rendered_structures_parse_back() {
    for case in CaseId::ALL {
        let ks = builtin_family(case, &FamilyParams { a: 0.75, b: 1.25, delta: 3.0 }).unwrap();
        let text = render::structure(&ks);
        let back = parse(&text).unwrap();
        assert!(structure_distance(&back.structure, &ks) < 1e-11, "{case}");
        assert_eq!(render::structure(&back.structure), text, "{case}");
    }
}

#[test]
fn form_rendering() {
    let f = parse("[algebra]\ndim = 4\n[lambda]\nlambda = (1 + 2*i)*u1 - u3 + 0.5*i*u4\n").unwrap().lambda.unwrap();
    let text = render::form(&f, 'u');
    assert_eq!(text, "(1 + 2*i)*u1 - u3 + 0.5*i*u4");
    let back = parse(&format!("[algebra]\ndim = 4\n[lambda]\nlambda = {text}\n")).unwrap().lambda.unwrap();
    assert_eq!(back, f);
}
