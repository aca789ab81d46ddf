use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::families::{builtin_family, curvature_fit, CaseId, CurvatureFit, FamilyParams};
use super::solver::{solve_type_i, solve_type_ii, SolutionFamily, SolutionKind};
use crate::deviance::Deviance;
use crate::error::{PskError, Result};
use crate::format::real;
use crate::lie_kahler::{curvature, levi_civita, KahlerStructure, UnitaryCoframe};
use crate::psk_verify::verify;
use crate::tensor_core::AlternatingForm;

/// Parameter points `(a, b)` where the type (i) solution set is nonempty.
const TYPE_I_CRITICAL: [(f64, f64); 2] = [(std::f64::consts::SQRT_2, 2.0), (2.0, std::f64::consts::SQRT_2)];

const FIT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureType {
    /// `a²H₁ + b²H₂`.
    TypeI,
    /// `−a²(Ω_P + 6bH₂)`.
    TypeII,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowVerdict {
    Accepted,
    RejectedD1,
    RejectedD2,
}

impl RowVerdict {
    pub fn reason(self) -> Option<&'static str> {
        match self {
            RowVerdict::Accepted => None,
            RowVerdict::RejectedD1 => Some("D1 unsolvable"),
            RowVerdict::RejectedD2 => Some("D2 infeasible"),
        }
    }

    pub fn label(self) -> &'static str {
        self.reason().unwrap_or("accepted")
    }
}

/// Which pair of coframe elements a 2-form term multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `θ^a∧θ^b`, `a < b`.
    Holomorphic,
    /// `θ̄^a∧θ^b`.
    Mixed,
    /// `θ̄^a∧θ̄^b`, `a < b`.
    Antiholomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoframeTerm {
    pub kind: PairKind,
    pub a: usize,
    pub b: usize,
    pub coeff: Complex64,
}

/// Expansion of a complex 2-form in the basis built from a unitary coframe.
pub fn type_decomposition(form: &AlternatingForm<Complex64>, coframe: &UnitaryCoframe) -> Vec<CoframeTerm> {
    let n = coframe.n();
    let vecs: Vec<Vec<Complex64>> = (0..n).map(|k| coframe.vector(k)).collect();
    let conj = |v: &[Complex64]| v.iter().map(|z| z.conj()).collect::<Vec<_>>();
    let mut out = Vec::new();
    let mut push = |kind, a, b, c: Complex64| {
        let c = Complex64::new(clean(c.re), clean(c.im));
        if c.norm() > 0.0 {
            out.push(CoframeTerm { kind, a, b, coeff: c });
        }
    };
    for a in 0..n {
        for b in a + 1..n {
            push(PairKind::Holomorphic, a, b, form.eval2(&vecs[a], &vecs[b]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            push(PairKind::Mixed, a, b, form.eval2(&conj(&vecs[a]), &vecs[b]));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            push(PairKind::Antiholomorphic, a, b, form.eval2(&conj(&vecs[a]), &conj(&vecs[b])));
        }
    }
    out
}

fn clean(v: f64) -> f64 {
    if v.abs() < 1e-12 {
        0.0
    } else {
        v
    }
}

/// `dθ^k` for every element of the standard unitary coframe.
pub fn coframe_differentials(ks: &KahlerStructure) -> Result<Vec<Vec<CoframeTerm>>> {
    let coframe = UnitaryCoframe::standard(ks.dim());
    (0..coframe.n()).map(|k| Ok(type_decomposition(&ks.alg.d(&coframe.theta(k))?, &coframe))).collect()
}

/// Curvature type and solution set of the curvature condition for a
/// 4-dimensional Kähler Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureAnalysis {
    pub fit: CurvatureFit,
    pub kind: CurvatureType,
    pub solution: SolutionFamily,
}

pub fn analyse_curvature(ks: &KahlerStructure) -> Result<CurvatureAnalysis> {
    if ks.dim() != 4 {
        return Err(PskError::UnsupportedDimension { expected: 2, got: ks.dim() / 2 });
    }
    let fit = curvature_fit(&curvature(&levi_civita(ks), &ks.alg));
    if fit.residual > FIT_TOL {
        return Err(PskError::OutOfDomain(format!("curvature outside span of H1, H2, Omega_P (residual {:e})", fit.residual)));
    }
    let nonneg_sqrt = |v: f64| if v >= -FIT_TOL { Some(v.max(0.0).sqrt()) } else { None };
    let (kind, solution) = if fit.proj.abs() < FIT_TOL {
        let solution = match (nonneg_sqrt(fit.h1), nonneg_sqrt(fit.h2)) {
            (Some(a), Some(b)) => solve_type_i(a, b),
            _ => empty_family(fit.h1, fit.h2),
        };
        (CurvatureType::TypeI, solution)
    } else {
        let a2 = -fit.proj;
        let b = fit.h2 / (6.0 * fit.proj);
        let solution = if a2 > 0.0 && fit.h1.abs() < FIT_TOL {
            solve_type_ii(a2.sqrt(), b)
        } else {
            empty_family(a2, b)
        };
        (CurvatureType::TypeII, solution)
    };
    Ok(CurvatureAnalysis { fit, kind, solution })
}

fn empty_family(a: f64, b: f64) -> SolutionFamily {
    SolutionFamily::empty(vec![("a", a), ("b", b)])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationRow {
    pub case: CaseId,
    pub params: FamilyParams,
    pub analysis: CurvatureAnalysis,
    /// Cubic coefficients `(c₁, c₂, c₃, c₄)` at phase zero, when a solution exists.
    pub cubic: Option<[Complex64; 4]>,
    pub verdict: RowVerdict,
    /// Coefficients of `λ` on `u¹..u⁴` for accepted rows.
    pub lambda: Option<Vec<f64>>,
    pub differentials: Vec<Vec<CoframeTerm>>,
    /// Other parameter points realizing the same row (isomorphic structures).
    pub equivalent: Vec<FamilyParams>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub rows: Vec<ClassificationRow>,
}

impl ClassificationReport {
    pub fn accepted(&self) -> impl Iterator<Item = &ClassificationRow> {
        self.rows.iter().filter(|r| r.verdict == RowVerdict::Accepted)
    }

    pub fn rejected(&self) -> impl Iterator<Item = &ClassificationRow> {
        self.rows.iter().filter(|r| r.verdict != RowVerdict::Accepted)
    }

    /// Aligned text table.
    pub fn to_text(&self) -> String {
        let header = ["case", "params", "curvature", "sigma", "verdict", "coframe differentials"];
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.case.to_string(),
                    format_params(r.case, &r.params),
                    format_curvature(&r.analysis.fit),
                    r.cubic.map(|c| format_cubic(&c, r.analysis.solution.phase_parameterized)).unwrap_or_else(|| "-".into()),
                    r.verdict.label().to_string(),
                    if r.differentials.is_empty() { "-".into() } else { format_differentials(&r.differentials) },
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&header.map(String::from));
        line(&widths.map(|w| "-".repeat(w)));
        for row in &body {
            line(row);
        }
        out
    }
}

pub fn format_params(case: CaseId, p: &FamilyParams) -> String {
    let mut parts: Vec<String> = case.scale_params().iter().map(|name| format!("{name}={}", real(p.get(name)))).collect();
    if case.uses_delta() {
        parts.push(format!("delta={}", real(p.delta)));
    }
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

pub fn format_curvature(fit: &CurvatureFit) -> String {
    let terms: Vec<String> = [(fit.h1, "H1"), (fit.h2, "H2"), (fit.proj, "Omega_P")]
        .iter()
        .filter(|(c, _)| c.abs() > FIT_TOL)
        .map(|(c, name)| format!("{}*{name}", real(*c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn format_complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => real(z.re),
        (true, false) => format!("{}i", real(z.im)),
        (false, false) => format!("({}{}{}i)", real(z.re), if z.im < 0.0 { "-" } else { "+" }, real(z.im.abs())),
    }
}

pub fn format_cubic(c: &[Complex64; 4], phased: bool) -> String {
    let monomials = ["(t1)^3", "(t1)^2 t2", "t1 (t2)^2", "(t2)^3"];
    let terms: Vec<String> = c
        .iter()
        .zip(monomials)
        .filter(|(z, _)| z.norm() > FIT_TOL)
        .map(|(z, m)| format!("{}*{m}", format_complex(Complex64::new(clean(z.re), clean(z.im)))))
        .collect();
    match (terms.is_empty(), phased) {
        (true, _) => "0".into(),
        (false, true) => format!("e^(i alpha)*({})", terms.join(" + ")),
        (false, false) => terms.join(" + "),
    }
}

pub fn format_differentials(diffs: &[Vec<CoframeTerm>]) -> String {
    diffs
        .iter()
        .enumerate()
        .map(|(k, terms)| {
            let rhs: Vec<String> = terms
                .iter()
                .map(|t| {
                    let pair = match t.kind {
                        PairKind::Holomorphic => format!("t{}^t{}", t.a + 1, t.b + 1),
                        PairKind::Mixed => format!("tb{}^t{}", t.a + 1, t.b + 1),
                        PairKind::Antiholomorphic => format!("tb{}^tb{}", t.a + 1, t.b + 1),
                    };
                    format!("{}*{pair}", format_complex(t.coeff))
                })
                .collect();
            format!("dt{} = {}", k + 1, if rhs.is_empty() { "0".into() } else { rhs.join(" + ") })
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Coefficient map `params² ↦ (h₁, h₂, p)`, valid because the structure
/// constants are linear in every scale parameter and curvature is quadratic.
struct Calibration {
    base: FamilyParams,
    names: &'static [&'static str],
    /// Columns `K_i`, one per scale parameter.
    columns: Vec<[f64; 3]>,
    /// Fit at the probe point with every scale parameter equal to one.
    at_unit: CurvatureFit,
}

fn fit_at(case: CaseId, p: &FamilyParams) -> Result<CurvatureFit> {
    let ks = builtin_family(case, p)?;
    Ok(curvature_fit(&curvature(&levi_civita(&ks), &ks.alg)))
}

impl Calibration {
    fn new(case: CaseId, delta: f64) -> Result<Self> {
        let base = FamilyParams { delta, ..FamilyParams::default() };
        let names = case.scale_params();
        let at_unit = fit_at(case, &base)?;
        let mut columns = Vec::new();
        for name in names {
            let mut p = base;
            p.set(name, 2.0);
            let f = fit_at(case, &p)?.as_vector();
            let u = at_unit.as_vector();
            columns.push([0, 1, 2].map(|i| (f[i] - u[i]) / 3.0));
        }
        let cal = Calibration { base, names, columns, at_unit };
        let sum = cal.predict(&vec![1.0; names.len()]);
        let unit = at_unit.as_vector();
        if names.is_empty() || (0..3).all(|i| (sum[i] - unit[i]).abs() < FIT_TOL) {
            Ok(cal)
        } else {
            Err(PskError::OutOfDomain(format!("curvature of case {case} is not a quadratic form in its parameters")))
        }
    }

    fn predict(&self, q: &[f64]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (col, qi) in self.columns.iter().zip(q) {
            for i in 0..3 {
                out[i] += col[i] * qi;
            }
        }
        out
    }

    /// Nonnegative `q = params²` with `K q = target`, if any.
    fn solve(&self, target: [f64; 3]) -> Option<FamilyParams> {
        if self.names.is_empty() {
            let u = self.at_unit.as_vector();
            return (0..3).all(|i| (u[i] - target[i]).abs() < FIT_TOL).then_some(self.base);
        }
        let k = DMatrix::from_fn(3, self.names.len(), |i, j| self.columns[j][i]);
        let t = DVector::from_row_slice(&target);
        let q = k.clone().svd(true, true).solve(&t, 1e-14).ok()?;
        if (&k * &q - &t).amax() > FIT_TOL || q.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let mut p = self.base;
        for (name, v) in self.names.iter().zip(q.iter()) {
            p.set(name, v.sqrt());
        }
        Some(p)
    }

    /// Parameter points at which the curvature condition may be solvable.
    fn candidates(&self) -> Vec<FamilyParams> {
        let all = std::iter::once(self.at_unit.as_vector()).chain(self.columns.iter().copied());
        let type_ii = all.clone().any(|v| v[2].abs() > FIT_TOL);
        if !type_ii {
            return TYPE_I_CRITICAL.iter().filter_map(|&(a, b)| self.solve([a * a, b * b, 0.0])).collect();
        }
        // Type (ii): the solution set can only be nonempty at `a = 1`, i.e.
        // projective coefficient −1, with `b` fixed by the family.
        let u = self.at_unit.as_vector();
        let target = if self.names.is_empty() { u } else { [u[0] / -u[2], u[1] / -u[2], -1.0] };
        self.solve(target).into_iter().collect()
    }
}

fn evaluate(case: CaseId, delta: f64) -> Result<ClassificationRow> {
    let cal = Calibration::new(case, delta)?;
    let candidates = cal.candidates();
    let Some((&first, rest)) = candidates.split_first() else {
        let ks = builtin_family(case, &cal.base)?;
        return Ok(ClassificationRow {
            case,
            params: cal.base,
            analysis: analyse_curvature(&ks)?,
            cubic: None,
            verdict: RowVerdict::RejectedD1,
            lambda: None,
            differentials: Vec::new(),
            equivalent: Vec::new(),
        });
    };
    let ks = builtin_family(case, &first)?;
    let analysis = analyse_curvature(&ks)?;
    if analysis.solution.kind == SolutionKind::Empty {
        return Ok(ClassificationRow {
            case,
            params: first,
            analysis,
            cubic: None,
            verdict: RowVerdict::RejectedD1,
            lambda: None,
            differentials: Vec::new(),
            equivalent: Vec::new(),
        });
    }
    let d = Deviance::from_xyzw(analysis.solution.base);
    let v = verify(&ks, &d)?;
    let verdict = match v.rejection_reason() {
        None => RowVerdict::Accepted,
        Some("D1 unsolvable") => RowVerdict::RejectedD1,
        Some(_) => RowVerdict::RejectedD2,
    };
    let accepted = verdict == RowVerdict::Accepted;
    let lambda = v.d2_lambda.as_ref().filter(|_| accepted).map(|l| (0..4).map(|i| clean(l.coefficient(&[i]).re)).collect());
    Ok(ClassificationRow {
        case,
        params: first,
        cubic: Some(d.cubic()?),
        verdict,
        lambda,
        differentials: if accepted { coframe_differentials(&ks)? } else { Vec::new() },
        equivalent: rest.to_vec(),
        analysis,
    })
}

/// Runs the classification over the nine families; families depending on `δ`
/// are evaluated at every grid value. Rows follow case order, then grid order.
pub fn classify(delta_grid: &[f64]) -> Result<ClassificationReport> {
    let cells: Vec<(CaseId, f64)> = CaseId::ALL
        .iter()
        .flat_map(|&case| {
            if case.uses_delta() {
                delta_grid.iter().map(|&d| (case, d)).collect::<Vec<_>>()
            } else {
                vec![(case, 1.0)]
            }
        })
        .collect();
    let rows = cells.par_iter().map(|&(case, delta)| evaluate(case, delta)).collect::<Result<Vec<_>>>()?;
    Ok(ClassificationReport { rows })
}
