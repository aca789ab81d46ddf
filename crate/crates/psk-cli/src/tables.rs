//! Reference documents for the built-in families. Each document is a valid
//! definition file whose comments carry the curvature decomposition, the
//! Levi-Civita connection and the minimal-norm potential.

use std::fmt::Write as _;

use psk::classify4d::{builtin_family, curvature_fit, format_curvature, format_params, CaseId, FamilyParams};
use psk::deviance::Deviance;
use psk::lie_kahler::{curvature, levi_civita};
use psk::psk_verify::d2_check;
use psk::PskError;

use crate::render;

pub const SEPARATOR: &str = "---";

/// Family samples in document order.
pub fn samples() -> Vec<(CaseId, FamilyParams)> {
    let mut out = Vec::new();
    for case in CaseId::ALL {
        if case.uses_delta() {
            for delta in [0.5, 1.0, 2.0] {
                out.push((case, FamilyParams { a: 1.0, b: 1.0, delta }));
            }
        } else {
            out.push((case, FamilyParams::default()));
        }
        if case == CaseId::III {
            out.push((case, FamilyParams { a: std::f64::consts::SQRT_2, b: 2.0, delta: 1.0 }));
        }
    }
    out
}

pub fn document(case: CaseId, params: &FamilyParams) -> Result<String, PskError> {
    let ks = builtin_family(case, params)?;
    let conn = levi_civita(&ks);
    let fit = curvature_fit(&curvature(&conn, &ks.alg));
    let mut out = format!("# case {case} ({}) {}\n", case.algebra(), format_params(case, params));
    let _ = writeln!(out, "# curvature = {}", format_curvature(&fit));
    out.push_str("# levi-civita connection:\n");
    for k in 0..ks.dim() {
        let row: Vec<String> = (0..ks.dim()).map(|j| render::form(conn.get(k, j), 'u')).collect();
        let _ = writeln!(out, "#   [{}]", row.join(", "));
    }
    let potential = d2_check(&ks, &Deviance::zero(ks.complex_dim()))?.lambda;
    let _ = writeln!(out, "# potential = {}", potential.map_or("none".into(), |l| render::form(&l, 'u')));
    out.push_str(&render::structure(&ks));
    Ok(out)
}

/// All documents, separated by `---` lines.
pub fn generate() -> Result<String, PskError> {
    let docs = samples().iter().map(|(case, p)| document(*case, p)).collect::<Result<Vec<_>, _>>()?;
    Ok(docs.join(&format!("{SEPARATOR}\n")))
}
