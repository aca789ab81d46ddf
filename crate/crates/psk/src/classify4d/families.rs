use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::deviance::{model_curvature, ModelKind};
use crate::error::{PskError, Result};
use crate::lie_kahler::{curvature, levi_civita, CurvatureTensor, KahlerStructure, LieAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl CaseId {
    pub const ALL: [CaseId; 9] =
        [CaseId::I, CaseId::II, CaseId::III, CaseId::IV, CaseId::V, CaseId::VI, CaseId::VII, CaseId::VIII, CaseId::IX];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
            CaseId::VI => "VI",
            CaseId::VII => "VII",
            CaseId::VIII => "VIII",
            CaseId::IX => "IX",
        }
    }

    /// Name of the underlying real Lie algebra.
    pub fn algebra(self) -> &'static str {
        match self {
            CaseId::I => "rr_{3,0}",
            CaseId::II => "rr'_{3,0}",
            CaseId::III => "r_2 r_2",
            CaseId::IV | CaseId::V => "r'_{4,0,delta}",
            CaseId::VI => "d_{4,2}",
            CaseId::VII => "d_{4,1/2}",
            CaseId::VIII | CaseId::IX => "d'_{4,delta}",
        }
    }

    /// Parameters that scale the structure constants linearly.
    pub fn scale_params(self) -> &'static [&'static str] {
        match self {
            CaseId::II => &[],
            CaseId::III => &["a", "b"],
            _ => &["a"],
        }
    }

    pub fn uses_delta(self) -> bool {
        matches!(self, CaseId::IV | CaseId::V | CaseId::VIII | CaseId::IX)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = PskError;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PskError::OutOfDomain(format!("unknown case {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams { a: 1.0, b: 1.0, delta: 1.0 }
    }
}

impl FamilyParams {
    pub fn get(&self, name: &str) -> f64 {
        match name {
            "a" => self.a,
            "b" => self.b,
            "delta" => self.delta,
            _ => panic!("unknown parameter {name}"),
        }
    }

    pub fn set(&mut self, name: &str, v: f64) {
        match name {
            "a" => self.a = v,
            "b" => self.b = v,
            "delta" => self.delta = v,
            _ => panic!("unknown parameter {name}"),
        }
    }
}

/// Structure constants in the unitary frame, with `I u1 = u2`, `I u3 = u4`,
/// `ω = u^{12} + u^{34}`.
pub fn builtin_family(case: CaseId, p: &FamilyParams) -> Result<KahlerStructure> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(PskError::OutOfDomain(format!("{name} = {v} must be positive")))
        }
    };
    let a = if case == CaseId::II { 1.0 } else { positive("a", p.a)? };
    let b = if case == CaseId::III { positive("b", p.b)? } else { 0.0 };
    let delta = if case.uses_delta() { positive("delta", p.delta)? } else { 1.0 };
    let s = delta.sqrt();
    let alg = LieAlgebra::abelian(4);
    let alg = match case {
        CaseId::I => alg.with_bracket(0, 1, &[(1, a)]),
        CaseId::II => alg.with_bracket(0, 2, &[(3, -1.0)]).with_bracket(0, 3, &[(2, 1.0)]),
        CaseId::III => alg.with_bracket(0, 1, &[(1, a)]).with_bracket(2, 3, &[(3, b)]),
        CaseId::IV => alg
            .with_bracket(0, 1, &[(1, a)])
            .with_bracket(0, 2, &[(3, -delta * a)])
            .with_bracket(0, 3, &[(2, delta * a)]),
        CaseId::V => alg
            .with_bracket(0, 1, &[(1, a)])
            .with_bracket(0, 2, &[(3, delta * a)])
            .with_bracket(0, 3, &[(2, -delta * a)]),
        CaseId::VI => alg
            .with_bracket(0, 1, &[(0, -2.0 * a)])
            .with_bracket(0, 2, &[(3, 2.0 * a)])
            .with_bracket(1, 2, &[(2, -a)])
            .with_bracket(1, 3, &[(3, a)]),
        CaseId::VII => alg
            .with_bracket(0, 1, &[(3, 2.0 * a)])
            .with_bracket(0, 2, &[(0, -a)])
            .with_bracket(1, 2, &[(1, -a)])
            .with_bracket(2, 3, &[(3, 2.0 * a)]),
        CaseId::VIII => alg
            .with_bracket(0, 1, &[(3, 2.0 * a * s)])
            .with_bracket(0, 2, &[(0, -a * s), (1, 2.0 * a / s)])
            .with_bracket(1, 2, &[(0, -2.0 * a / s), (1, -a * s)])
            .with_bracket(2, 3, &[(3, 2.0 * a * s)]),
        CaseId::IX => alg
            .with_bracket(0, 1, &[(2, -2.0 * a * s)])
            .with_bracket(0, 3, &[(0, -a * s), (1, -2.0 * a / s)])
            .with_bracket(1, 3, &[(0, 2.0 * a / s), (1, -a * s)])
            .with_bracket(2, 3, &[(2, -2.0 * a * s)]),
    };
    Ok(KahlerStructure::standard(alg))
}

/// Coefficients of a curvature tensor on the basis `{H₁, H₂, Ω_P}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureFit {
    pub h1: f64,
    pub h2: f64,
    pub proj: f64,
    pub residual: f64,
}

impl CurvatureFit {
    pub fn as_vector(&self) -> [f64; 3] {
        [self.h1, self.h2, self.proj]
    }
}

fn flatten(r: &CurvatureTensor) -> Vec<f64> {
    let d = r.dim();
    let mut v = Vec::new();
    for l in 0..d {
        for k in 0..d {
            let f = r.real().get(l, k);
            for i in 0..d {
                for j in i + 1..d {
                    let c = f.coefficient(&[i, j]);
                    v.push(c.re);
                    v.push(c.im);
                }
            }
        }
    }
    v
}

/// Least-squares decomposition of a 4-dimensional curvature tensor.
pub fn curvature_fit(r: &CurvatureTensor) -> CurvatureFit {
    let basis = [ModelKind::H1, ModelKind::H2, ModelKind::Projective(2)].map(|k| flatten(&model_curvature(k)));
    let target = DVector::from_vec(flatten(r));
    let a = DMatrix::from_fn(target.len(), 3, |i, j| basis[j][i]);
    let x = a.clone().svd(true, true).solve(&target, 1e-14).expect("SVD with both factors");
    let residual = (&a * &x - &target).amax();
    let clean = |v: f64| if v.abs() < 1e-13 { 0.0 } else { v };
    CurvatureFit { h1: clean(x[0]), h2: clean(x[1]), proj: clean(x[2]), residual }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureRow {
    pub case: CaseId,
    pub params: FamilyParams,
    pub fit: CurvatureFit,
}

/// Curvature decomposition for each `(case, params)` sample.
pub fn curvature_table(samples: &[(CaseId, FamilyParams)]) -> Result<Vec<CurvatureRow>> {
    samples
        .iter()
        .map(|&(case, params)| {
            let ks = builtin_family(case, &params)?;
            let r = curvature(&levi_civita(&ks), &ks.alg);
            Ok(CurvatureRow { case, params, fit: curvature_fit(&r) })
        })
        .collect()
}
