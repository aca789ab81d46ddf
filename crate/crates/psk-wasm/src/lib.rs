//! Browser bindings. Every exported function returns a JSON document; on
//! failure the document is `{"error": "..."}`.

use num_complex::Complex64;
use psk::classify4d::{
    analyse_curvature, brute_force_solutions, builtin_family, coframe_differentials, format_cubic, format_curvature,
    format_differentials, solve_type_i, solve_type_ii, CaseId, CurvatureType, D1Target, FamilyParams, SolutionFamily,
    SolutionKind,
};
use psk::deviance::{model_curvature, projective_blocks, Deviance, ModelKind};
use psk::format::real;
use psk::lie_kahler::{CurvatureBlocks, UnitaryCoframe};
use psk::psk_verify::{scalar_bound_check, verify};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn to_json(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn kind_label(kind: SolutionKind) -> &'static str {
    match kind {
        SolutionKind::CircleFamily => "circle",
        SolutionKind::ZeroOnly => "zero",
        SolutionKind::Empty => "empty",
    }
}

fn solution_json(family: &SolutionFamily) -> Result<Value, String> {
    let cubic = Deviance::from_xyzw(family.base).cubic().map_err(|e| e.to_string())?;
    Ok(json!({
        "kind": kind_label(family.kind),
        "xyzw": family.base.map(complex),
        "cubic": cubic.map(complex),
        "sigma": if family.is_empty() { "-".to_string() } else { format_cubic(&cubic, family.phase_parameterized) },
    }))
}

/// Curvature condition for a model curvature of either type:
/// `a²H₁ + b²H₂` (`"i"`) or `−a²(Ω_P + 6bH₂)` (`"ii"`). Reports the analytic
/// solution set and, from `starts` random initial points, the smallest
/// residual a numerical search reaches.
pub fn curvature_condition(kind: &str, a: f64, b: f64, starts: usize) -> Result<Value, String> {
    if !(a.is_finite() && b.is_finite()) {
        return Err("parameters must be finite".into());
    }
    let frame = UnitaryCoframe::standard(4);
    let block = |k: ModelKind| model_curvature(k).complexify(&frame).map_err(|e| e.to_string());
    let (blocks, family, label): (CurvatureBlocks, _, _) = match kind {
        "i" => (
            block(ModelKind::H1)?.scale(a * a).add(&block(ModelKind::H2)?.scale(b * b)),
            solve_type_i(a, b),
            format!("{}*H1 + {}*H2", real(a * a), real(b * b)),
        ),
        "ii" => (
            projective_blocks(2).add(&block(ModelKind::H2)?.scale(6.0 * b)).scale(-a * a),
            solve_type_ii(a, b),
            format!("-{}*(Omega_P + {}*H2)", real(a * a), real(6.0 * b)),
        ),
        other => return Err(format!("unknown curvature type {other:?}")),
    };
    let r = blocks.realify_standard();
    let target = D1Target::from_curvature(&r).map_err(|e| e.to_string())?;
    let search = brute_force_solutions(&r, starts.clamp(1, 500), 1).map_err(|e| e.to_string())?;
    Ok(json!({
        "curvature": label,
        "solution": solution_json(&family)?,
        "residual_at_solution": if family.is_empty() { Value::Null } else { json!(target.max_residual(&family.base)) },
        "search_floor": search.floor,
        "search_hits": search.points.len(),
    }))
}

/// `[η∧η̄]`, `‖η‖²` and the forced scalar curvature for the cubic
/// `Σ c_k (θ¹)^{4−k}(θ²)^{k−1}`, plus the change of the bracket under
/// `η ↦ e^{iα}η`.
pub fn deviance_bracket(coefficients: &[f64], alpha: f64) -> Result<Value, String> {
    let [r1, i1, r2, i2, r3, i3, r4, i4] = coefficients else {
        return Err(format!("expected 8 numbers (re, im of c1..c4), got {}", coefficients.len()));
    };
    let d = Deviance::from_cubic([
        Complex64::new(*r1, *i1),
        Complex64::new(*r2, *i2),
        Complex64::new(*r3, *i3),
        Complex64::new(*r4, *i4),
    ]);
    let bracket = d.bracket();
    let blocks: Vec<Value> = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(c, k)| {
            let m = bracket.get(c, k);
            json!({
                "block": [c + 1, k + 1],
                "entries": [[complex(m[(0, 0)]), complex(m[(0, 1)])], [complex(m[(1, 0)]), complex(m[(1, 1)])]],
            })
        })
        .collect();
    let xyzw = d.xyzw().map_err(|e| e.to_string())?;
    Ok(json!({
        "xyzw": xyzw.map(complex),
        "blocks": blocks,
        "norm_sq": d.norm_sq(),
        "scal": scalar_bound_check(2, &d),
        "hermitian_residual": bracket.hermitian_residual(),
        "phase_change": d.phase_rotate(alpha).bracket().sub(&bracket).max_abs(),
    }))
}

/// Curvature type, deviance and verdict for one built-in family.
pub fn family_verdict(case: &str, a: f64, b: f64, delta: f64) -> Result<Value, String> {
    let case: CaseId = case.parse().map_err(|e: psk::PskError| e.to_string())?;
    let params = FamilyParams { a, b, delta };
    let ks = builtin_family(case, &params).map_err(|e| e.to_string())?;
    let analysis = analyse_curvature(&ks).map_err(|e| e.to_string())?;
    let mut out = json!({
        "case": case.name(),
        "algebra": case.algebra(),
        "curvature": format_curvature(&analysis.fit),
        "type": match analysis.kind { CurvatureType::TypeI => "i", CurvatureType::TypeII => "ii" },
        "solution": solution_json(&analysis.solution)?,
        "differentials": format_differentials(&coframe_differentials(&ks).map_err(|e| e.to_string())?),
    });
    if analysis.solution.is_empty() {
        out["verdict"] = json!("D1 unsolvable");
        return Ok(out);
    }
    let v = verify(&ks, &Deviance::from_xyzw(analysis.solution.base)).map_err(|e| e.to_string())?;
    out["verdict"] = json!(v.rejection_reason().unwrap_or("accepted"));
    out["scal"] = json!(v.scal);
    out["norm_sq"] = json!(v.eta_norm_sq);
    out["lambda"] = match &v.d2_lambda {
        Some(l) => json!((0..4).map(|k| l.coefficient(&[k]).re).collect::<Vec<_>>()),
        None => Value::Null,
    };
    Ok(out)
}

#[wasm_bindgen(js_name = curvatureCondition)]
pub fn curvature_condition_js(kind: &str, a: f64, b: f64, starts: usize) -> String {
    to_json(curvature_condition(kind, a, b, starts))
}

#[wasm_bindgen(js_name = devianceBracket)]
pub fn deviance_bracket_js(coefficients: &[f64], alpha: f64) -> String {
    to_json(deviance_bracket(coefficients, alpha))
}

#[wasm_bindgen(js_name = familyVerdict)]
pub fn family_verdict_js(case: &str, a: f64, b: f64, delta: f64) -> String {
    to_json(family_verdict(case, a, b, delta))
}
