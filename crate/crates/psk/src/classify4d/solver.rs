//! Closed-form solution of the curvature condition for the two curvature
//! types occurring in dimension 4. In terms of `v₁=(x,y)`, `v₂=(y,z)`,
//! `v₃=(z,w)` the condition is a norm system on `‖v_i‖²` plus the
//! orthogonality system `⟨v₁,v₂⟩ = ⟨v₂,v₃⟩ = ⟨v₁,v₃⟩ = 0`.

use num_complex::Complex64;

use crate::TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    /// `{ e^{iα} · base }` for all real `α`.
    CircleFamily,
    /// Only the zero deviance.
    ZeroOnly,
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily {
    pub kind: SolutionKind,
    /// Base point `(x, y, z, w)`; zero unless `kind` is a circle family.
    pub base: [Complex64; 4],
    pub phase_parameterized: bool,
    pub params_at_solution: Vec<(&'static str, f64)>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl SolutionFamily {
    pub(crate) fn empty(params: Vec<(&'static str, f64)>) -> Self {
        SolutionFamily { kind: SolutionKind::Empty, base: [ZERO; 4], phase_parameterized: false, params_at_solution: params }
    }

    fn zero_only(params: Vec<(&'static str, f64)>) -> Self {
        SolutionFamily { kind: SolutionKind::ZeroOnly, base: [ZERO; 4], phase_parameterized: false, params_at_solution: params }
    }

    fn circle(base: [f64; 4], params: Vec<(&'static str, f64)>) -> Self {
        SolutionFamily {
            kind: SolutionKind::CircleFamily,
            base: base.map(|v| Complex64::new(v, 0.0)),
            phase_parameterized: true,
            params_at_solution: params,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kind == SolutionKind::Empty
    }

    /// Member of the family at phase `α`.
    pub fn member(&self, alpha: f64) -> [Complex64; 4] {
        let u = Complex64::from_polar(1.0, alpha);
        self.base.map(|z| z * u)
    }

    /// Distance from `p` to the family.
    pub fn distance(&self, p: &[Complex64; 4]) -> f64 {
        match self.kind {
            SolutionKind::Empty => f64::INFINITY,
            SolutionKind::ZeroOnly => p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            SolutionKind::CircleFamily => phase_distance(p, &self.base),
        }
    }
}

/// `min_α ‖p − e^{iα} b‖ = sqrt(‖p‖² + ‖b‖² − 2|⟨b,p⟩|)`.
pub fn phase_distance(p: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let np: f64 = p.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let ip: Complex64 = b.iter().zip(p).map(|(u, v)| u.conj() * v).sum();
    (np + nb - 2.0 * ip.norm()).max(0.0).sqrt()
}

fn near(u: f64, v: f64) -> bool {
    (u - v).abs() < TOLERANCE * 1.0f64.max(u.abs()).max(v.abs())
}

/// Curvature `a² H₁ + b² H₂` (`a, b ≥ 0`).
///
/// Norm system `‖v₁‖² = 2 − a²/2`, `‖v₂‖² = 1`, `‖v₃‖² = 2 − b²/2`; with
/// `s = |z|²` this gives `|x|² = 1 − a²/2 + s`, `|y|² = 1 − s`,
/// `|w|² = 2 − b²/2 − s`. The orthogonality system forces `x = w = 0` when
/// exactly one of `y, z` vanishes and has no solution when both are nonzero.
pub fn solve_type_i(a: f64, b: f64) -> SolutionFamily {
    let params = vec![("a", a), ("b", b)];
    let n1 = 2.0 - a * a / 2.0;
    let n3 = 2.0 - b * b / 2.0;
    let x_sq = |s: f64| n1 - 1.0 + s;
    let w_sq = |s: f64| n3 - s;

    // z = 0, |y| = 1, x = w = 0: both the norm-system values and the branch
    // values (zero) must agree at s = 0.
    if near(x_sq(0.0), 0.0) && near(w_sq(0.0), 0.0) {
        return SolutionFamily::circle([0.0, 1.0, 0.0, 0.0], params);
    }
    // y = 0, |z| = 1, x = w = 0 at the other endpoint s = 1.
    if near(x_sq(1.0), 0.0) && near(w_sq(1.0), 0.0) {
        return SolutionFamily::circle([0.0, 0.0, 1.0, 0.0], params);
    }
    // 0 < s < 1 with y, z ≠ 0: ⟨v₁,v₃⟩ = −t²/(s(1−s)) ≠ 0 for t = ȳz.
    SolutionFamily::empty(params)
}

/// Curvature `−a²(Ω_P + 6b H₂)` (`a > 0`, `b ≥ 0`).
///
/// Norm system `‖v₁‖² = 2(1−a²)`, `‖v₂‖² = 1−a²`, `‖v₃‖² = 2(1−a²) + 3a²b`.
pub fn solve_type_ii(a: f64, b: f64) -> SolutionFamily {
    let params = vec![("a", a), ("b", b)];
    let t = 1.0 - a * a;
    if near(a * a, 1.0) {
        // y = z = 0 forces x = 0 and |w|² = 3b.
        let w_sq = 3.0 * b;
        return if near(w_sq, 0.0) {
            SolutionFamily::zero_only(params)
        } else if w_sq > 0.0 {
            SolutionFamily::circle([0.0, 0.0, 0.0, w_sq.sqrt()], params)
        } else {
            SolutionFamily::empty(params)
        };
    }
    if t < 0.0 {
        // ‖v₂‖² < 0.
        return SolutionFamily::empty(params);
    }
    // 0 < a < 1: z = 0 gives |x|² = t ≠ 0 against x = 0; y = 0 gives
    // |x|² = 2t ≠ 0 against x = 0; y, z ≠ 0 forces a = 1.
    SolutionFamily::empty(params)
}
