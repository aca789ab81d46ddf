use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use psk::classify4d::{classify, curvature_fit, format_cubic, format_curvature, format_params};
use psk::conic_lift::{ConicLift, RingResidual};
use psk::deviance::Deviance;
use psk::format::real;
use psk::lie_kahler::{curvature, levi_civita, ricci_scalar, unitary_coframe, KahlerReport};
use psk::psk_verify::{d2_check, d2_matrix_residual, verify};
use psk::tensor_core::AlternatingForm;
use serde_json::{json, Map, Value};

use crate::grammar::{parse_algebra, parse_bindings, AlgebraFile};
use crate::render::{self, number};
use crate::{tables, Cli, Command, Failure, Format, Outcome, Status};

pub const SCHEMA: &str = "psk-report/1";

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(Failure::new(Status::Usage, format!("tolerance must be positive, got {}", cli.tolerance)));
    }
    let report = match &cli.command {
        Command::Check { file } => check(&load(cli, file)?, cli.tolerance),
        Command::Curvature { file } => curvature_report(&validated(cli, file)?),
        Command::Verify { file } => verify_report(&validated(cli, file)?, cli.tolerance)?,
        Command::Lift { file } => lift_report(&validated(cli, file)?)?,
        Command::Classify4 => classify_report(&cli.grid)?,
        Command::Tables { out } => {
            let text = tables::generate()?;
            return match out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Failure::new(Status::Usage, format!("cannot write {}: {e}", path.display())))?;
                    Ok(Outcome { output: String::new(), status: Status::Ok })
                }
                None => Ok(Outcome { output: text, status: Status::Ok }),
            };
        }
    };
    let output = match cli.format {
        Format::Text => report.text,
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("schema".into(), json!(SCHEMA));
            doc.insert("command".into(), json!(command_name(&cli.command)));
            doc.insert("status".into(), json!(report.status as i32));
            doc.extend(report.json);
            serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable") + "\n"
        }
    };
    Ok(Outcome { output, status: report.status })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Curvature { .. } => "curvature",
        Command::Verify { .. } => "verify",
        Command::Classify4 => "classify4",
        Command::Lift { .. } => "lift",
        Command::Tables { .. } => "tables",
    }
}

struct Report {
    text: String,
    json: Map<String, Value>,
    status: Status,
}

fn load(cli: &Cli, path: &Path) -> Result<AlgebraFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(Status::Usage, format!("cannot read {}: {e}", path.display())))?;
    let bindings = parse_bindings(&cli.params).map_err(|e| Failure::new(Status::Usage, format!("--param: {}", e.message)))?;
    parse_algebra(&text, &bindings).map_err(|e| Failure::new(Status::Usage, format!("{}: {e}", path.display())))
}

struct Validation {
    jacobi: f64,
    kahler: KahlerReport,
}

impl Validation {
    fn of(file: &AlgebraFile) -> Self {
        Validation { jacobi: file.structure.alg.jacobi_residual(), kahler: file.structure.kahler_check() }
    }

    fn passes(&self, tol: f64) -> bool {
        self.jacobi < tol && self.kahler.passes(tol)
    }

    fn lines(&self) -> String {
        format!(
            "jacobi residual = {}\nd(omega) residual = {}\nnijenhuis residual = {}\ncompatibility residual = {}\n",
            real(self.jacobi),
            real(self.kahler.d_omega),
            real(self.kahler.nijenhuis),
            real(self.kahler.compat)
        )
    }
}

/// Loads a file and refuses structures that are not Kähler Lie algebras.
fn validated(cli: &Cli, path: &Path) -> Result<AlgebraFile, Failure> {
    let file = load(cli, path)?;
    let v = Validation::of(&file);
    if !v.passes(cli.tolerance) {
        return Err(Failure::new(Status::Validation, format!("{}: not a Kähler Lie algebra\n{}", path.display(), v.lines().trim_end())));
    }
    Ok(file)
}

fn check(file: &AlgebraFile, tol: f64) -> Report {
    let v = Validation::of(file);
    let ok = v.passes(tol);
    let text = format!("dim = {}\n{}verdict: {}\n", file.structure.dim(), v.lines(), if ok { "Kähler" } else { "not Kähler" });
    let mut json = Map::new();
    json.insert("dim".into(), json!(file.structure.dim()));
    json.insert("jacobi".into(), number(v.jacobi));
    json.insert("d_omega".into(), number(v.kahler.d_omega));
    json.insert("nijenhuis".into(), number(v.kahler.nijenhuis));
    json.insert("compat".into(), number(v.kahler.compat));
    json.insert("kahler".into(), json!(ok));
    Report { text, json, status: if ok { Status::Ok } else { Status::Validation } }
}

fn matrix_json(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array(m.row_iter().map(|r| Value::Array(r.iter().map(|x| number(*x)).collect())).collect())
}

fn curvature_report(file: &AlgebraFile) -> Report {
    let ks = &file.structure;
    let d = ks.dim();
    let conn = levi_civita(ks);
    let r = curvature(&conn, &ks.alg);
    let (ric, scal) = ricci_scalar(&r);
    let mut text = String::from("levi-civita connection:\n");
    let mut conn_json = Vec::new();
    for k in 0..d {
        for j in 0..d {
            let f = conn.get(k, j);
            if f.max_abs() > 1e-13 {
                let _ = writeln!(text, "  w^{}_{} = {}", k + 1, j + 1, render::form(f, 'u'));
                conn_json.push(json!({"row": k + 1, "col": j + 1, "form": render::form(f, 'u')}));
            }
        }
    }
    text.push_str("curvature:\n");
    let mut curv_json = Vec::new();
    for k in 0..d {
        for j in 0..d {
            let f = r.real().get(k, j);
            if f.max_abs() > 1e-13 {
                let _ = writeln!(text, "  R^{}_{} = {}", k + 1, j + 1, render::form(f, 'u'));
                curv_json.push(json!({"row": k + 1, "col": j + 1, "form": render::form(f, 'u')}));
            }
        }
    }
    let mut json = Map::new();
    if d == 4 {
        let fit = curvature_fit(&r);
        let _ = writeln!(text, "decomposition = {} (fit residual {})", format_curvature(&fit), real(fit.residual));
        json.insert(
            "decomposition".into(),
            json!({"H1": number(fit.h1), "H2": number(fit.h2), "Omega_P": number(fit.proj), "residual": number(fit.residual)}),
        );
    }
    text.push_str("ricci:\n");
    for row in ric.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| real(*x)).collect();
        let _ = writeln!(text, "  [{}]", cells.join(", "));
    }
    let _ = writeln!(text, "scal(paper convention) = {}", real(scal));
    let _ = writeln!(text, "trace of ricci = {}", real(ric.trace()));
    json.insert("connection".into(), Value::Array(conn_json));
    json.insert("curvature".into(), Value::Array(curv_json));
    json.insert("ricci".into(), matrix_json(&ric));
    json.insert("scal_normalized".into(), number(scal));
    json.insert("ricci_trace".into(), number(ric.trace()));
    Report { text, json, status: Status::Ok }
}

fn deviance_of(file: &AlgebraFile) -> Deviance {
    file.deviance.clone().unwrap_or_else(|| Deviance::zero(file.structure.complex_dim()))
}

fn verify_report(file: &AlgebraFile, tol: f64) -> Result<Report, Failure> {
    let ks = &file.structure;
    let d = deviance_of(file);
    let v = verify(ks, &d)?;
    let d1_ok = v.d1_residual < tol;
    let mut accepted = d1_ok && v.d2_feasible;
    let mut text = String::new();
    let mut json = Map::new();
    let _ = writeln!(text, "D1 residual = {}", real(v.d1_residual));
    let _ = writeln!(text, "D2 feasible = {}", if v.d2_feasible { "yes" } else { "no" });
    let _ = writeln!(text, "D2 residual = {}", real(v.d2_residual));
    if let Some(lambda) = &v.d2_lambda {
        let _ = writeln!(text, "lambda = {}", render::form(lambda, 'u'));
        json.insert("lambda".into(), json!(render::form(lambda, 'u')));
    }
    if let Some(given) = &file.lambda {
        let r = d2_matrix_residual(ks, &d, given)?;
        let closed = (&ks.alg.d(given)? - &ks.omega).max_abs();
        let ok = r < tol && closed < tol;
        accepted &= ok;
        let _ = writeln!(text, "given lambda residual = {} (d lambda - omega = {})", real(r), real(closed));
        json.insert("given_lambda".into(), json!({"form": render::form(given, 'u'), "residual": number(r), "d_lambda_minus_omega": number(closed)}));
    }
    let _ = writeln!(text, "ricci identity residual = {}", real(v.ricci_residual));
    let _ = writeln!(text, "scalar identity residual = {}", real(v.scalar_residual));
    let _ = writeln!(text, "scal = {}", real(v.scal));
    let _ = writeln!(text, "|eta|^2 = {}", real(v.eta_norm_sq));
    let reason = if accepted {
        None
    } else if !d1_ok {
        Some("D1 unsolvable")
    } else if !v.d2_feasible {
        Some("D2 infeasible")
    } else {
        Some("given lambda fails")
    };
    let _ = writeln!(text, "verdict: {}", reason.map_or("accepted".to_string(), |r| format!("rejected ({r})")));
    json.insert("d1_residual".into(), number(v.d1_residual));
    json.insert("d2_feasible".into(), json!(v.d2_feasible));
    json.insert("d2_residual".into(), number(v.d2_residual));
    json.insert("ricci_residual".into(), number(v.ricci_residual));
    json.insert("scalar_residual".into(), number(v.scalar_residual));
    json.insert("scal".into(), number(v.scal));
    json.insert("eta_norm_sq".into(), number(v.eta_norm_sq));
    json.insert("accepted".into(), json!(accepted));
    json.insert("reason".into(), json!(reason));
    Ok(Report { text, json, status: if accepted { Status::Ok } else { Status::Assertion } })
}

fn lambda_form(coefficients: &[f64]) -> AlternatingForm<Complex64> {
    let d = coefficients.len();
    coefficients
        .iter()
        .enumerate()
        .fold(AlternatingForm::zero(d, 1), |acc, (k, c)| &acc + &AlternatingForm::basis(d, k).scale(&Complex64::new(*c, 0.0)))
}

fn classify_report(grid: &[f64]) -> Result<Report, Failure> {
    if grid.is_empty() || grid.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Failure::new(Status::Usage, "--grid needs positive delta values"));
    }
    let report = classify(grid)?;
    let mut text = report.to_text();
    text.push_str("\npotentials:\n");
    let mut rows = Vec::new();
    for row in &report.rows {
        let lambda = row.lambda.as_deref().map(lambda_form);
        if let Some(l) = &lambda {
            let _ = writeln!(text, "  {} {}: lambda = {}", row.case, format_params(row.case, &row.params), render::form(l, 'u'));
        }
        rows.push(json!({
            "case": row.case.name(),
            "params": {"a": number(row.params.a), "b": number(row.params.b), "delta": number(row.params.delta)},
            "curvature": format_curvature(&row.analysis.fit),
            "sigma": row.cubic.map(|c| format_cubic(&c, row.analysis.solution.phase_parameterized)),
            "cubic": row.cubic.map(|c| c.iter().map(|z| render::complex_number(*z)).collect::<Vec<_>>()),
            "verdict": row.verdict.label(),
            "lambda": lambda.as_ref().map(|l| render::form(l, 'u')),
        }));
    }
    let mut json = Map::new();
    json.insert("grid".into(), Value::Array(grid.iter().map(|d| number(*d)).collect()));
    json.insert("rows".into(), Value::Array(rows));
    json.insert("accepted".into(), json!(report.accepted().count()));
    Ok(Report { text, json, status: Status::Ok })
}

fn residual_text(r: RingResidual) -> String {
    if r.exact_zero {
        "exact zero".into()
    } else {
        format!("nonzero (max coefficient {})", real(r.max_abs))
    }
}

fn lift_report(file: &AlgebraFile) -> Result<Report, Failure> {
    let ks = &file.structure;
    let d = deviance_of(file);
    let lambda = match &file.lambda {
        Some(l) => l.clone(),
        None => d2_check(ks, &d)?
            .lambda
            .ok_or_else(|| Failure::new(Status::Assertion, "no left-invariant potential solves the differential condition"))?,
    };
    // Reject structures outside the standard unitary frame before the exact pass.
    unitary_coframe(ks)?;
    let lift = ConicLift::new(ks, &lambda, &d)?;
    let mut checks: Vec<(&str, RingResidual)> = vec![("torsion", lift.torsion_residual()), ("lift_curvature", lift.lift_curvature_check())];
    let flat = lift.flat_connection_check();
    checks.push(("flat_curvature", flat.curvature));
    checks.push(("deviance_identity", flat.deviance_identity));
    checks.push(("bracket_identity", flat.bracket_identity));
    let inv = lift.definition_invariants();
    checks.extend(inv.residuals());

    let mut text = format!("lambda = {}\n", render::form(&lambda, 'u'));
    let mut json = Map::new();
    json.insert("lambda".into(), json!(render::form(&lambda, 'u')));
    let mut residuals = Map::new();
    for (name, r) in &checks {
        let _ = writeln!(text, "{name}: {}", residual_text(*r));
        residuals.insert((*name).into(), json!({"exact_zero": r.exact_zero, "max_abs": number(r.max_abs)}));
    }
    let _ = writeln!(text, "homogeneous cubic: {}", if flat.homogeneous { "yes" } else { "no" });
    let _ = writeln!(
        text,
        "signature = ({}, {}), expected ({}, {})",
        inv.signature.0, inv.signature.1, inv.expected_signature.0, inv.expected_signature.1
    );
    let ok = checks.iter().all(|(_, r)| r.exact_zero) && flat.homogeneous && inv.signature == inv.expected_signature;
    let _ = writeln!(text, "verdict: {}", if ok { "conic lift is exact" } else { "conic lift fails" });
    json.insert("residuals".into(), Value::Object(residuals));
    json.insert("homogeneous".into(), json!(flat.homogeneous));
    json.insert("signature".into(), json!([inv.signature.0, inv.signature.1]));
    json.insert("expected_signature".into(), json!([inv.expected_signature.0, inv.expected_signature.1]));
    json.insert("exact".into(), json!(ok));
    Ok(Report { text, json, status: if ok { Status::Ok } else { Status::Assertion } })
}
