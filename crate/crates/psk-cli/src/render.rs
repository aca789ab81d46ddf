//! Text rendering of forms and structures in the file grammar, so every
//! printed form can be pasted back into a definition file.

use num_complex::Complex64;
use psk::format::real;
use psk::lie_kahler::{kahler_form, KahlerStructure};
use psk::tensor_core::AlternatingForm;

/// Coefficients below this are printed as absent.
const ZERO: f64 = 1e-13;

fn clean(x: f64) -> f64 {
    if x.abs() < ZERO {
        0.0
    } else {
        x
    }
}

/// `3`, `-0.5*i`, `(1 + 2*i)`.
pub fn coefficient(z: Complex64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => real(re),
        (true, false) => format!("{}*i", real(im)),
        (false, false) => format!("({} {} {}*i)", real(re), if im < 0.0 { "-" } else { "+" }, real(im.abs())),
    }
}

fn monomial(indices: &[usize], atom: char) -> String {
    indices.iter().map(|k| format!("{atom}{}", k + 1)).collect::<Vec<_>>().join("^")
}

/// Sum of terms like `-0.707106781187*u2 - 0.5*u4`; `0` when empty.
pub fn form(f: &AlternatingForm<Complex64>, atom: char) -> String {
    let mut out = String::new();
    for (indices, c) in f.terms() {
        let (re, im) = (clean(c.re), clean(c.im));
        if re == 0.0 && im == 0.0 {
            continue;
        }
        let negative_real = im == 0.0 && re < 0.0;
        let magnitude = if negative_real { Complex64::new(-re, 0.0) } else { Complex64::new(re, im) };
        let body = if indices.is_empty() {
            coefficient(magnitude)
        } else if im == 0.0 && magnitude.re == 1.0 {
            monomial(&indices, atom)
        } else {
            format!("{}*{}", coefficient(magnitude), monomial(&indices, atom))
        };
        match (out.is_empty(), negative_real) {
            (true, true) => out.push_str(&format!("-{body}")),
            (true, false) => out.push_str(&body),
            (false, true) => out.push_str(&format!(" - {body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn vector(v: &[f64]) -> AlternatingForm<Complex64> {
    let d = v.len();
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() >= ZERO)
        .fold(AlternatingForm::zero(d, 1), |acc, (k, x)| &acc + &AlternatingForm::basis(d, k).scale(&Complex64::new(*x, 0.0)))
}

/// `[algebra]`, `[complex]` and, when it differs from the one induced by
/// `I`, `[omega]` sections.
pub fn structure(ks: &KahlerStructure) -> String {
    let d = ks.dim();
    let mut out = format!("[algebra]\ndim = {d}\n");
    for i in 0..d {
        for j in i + 1..d {
            let v: Vec<f64> = (0..d).map(|k| ks.alg.get(k, i, j)).collect();
            if v.iter().any(|x| x.abs() >= ZERO) {
                out.push_str(&format!("({},{}) -> {}\n", i + 1, j + 1, form(&vector(&v), 'e')));
            }
        }
    }
    out.push_str("[complex]\n");
    for j in 0..d {
        let column: Vec<f64> = ks.imat.column(j).iter().copied().collect();
        out.push_str(&format!("e{} -> {}\n", j + 1, form(&vector(&column), 'e')));
    }
    if (&ks.omega - &kahler_form(&ks.imat)).max_abs() > 0.0 {
        out.push_str(&format!("[omega]\nomega = {}\n", form(&ks.omega, 'u')));
    }
    out
}

/// Rounds to 12 significant digits for machine-readable output.
pub fn number(x: f64) -> serde_json::Value {
    match real(x).parse::<f64>() {
        Ok(v) if v.is_finite() => serde_json::json!(v),
        _ => serde_json::Value::String(real(x)),
    }
}

pub fn complex_number(z: Complex64) -> serde_json::Value {
    serde_json::json!([number(z.re), number(z.im)])
}
