//! Symmetric cubic deviance tensors in a unitary coframe.
//!
//! A cubic `σ = Σ σ_{pqr} θ^p θ^q θ^r` (totally symmetric coefficients) is
//! raised to `η^j_{kh} = 2 σ_{kjh}`. For complex dimension 2 the cubic is
//! written `c₁(θ¹)³ + c₂(θ¹)²θ² + c₃θ¹(θ²)² + c₄(θ²)³`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{PskError, Result};
use crate::lie_kahler::{CurvatureBlocks, CurvatureTensor};
use crate::tensor_core::AlternatingForm;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Deviance {
    n: usize,
    eta: Vec<Complex64>,
}

fn idx(n: usize, j: usize, k: usize, h: usize) -> usize {
    (j * n + k) * n + h
}

/// Number of distinct orderings of a multiset of three indices.
fn orderings(p: usize, q: usize, r: usize) -> f64 {
    if p == q && q == r {
        1.0
    } else if p == q || q == r || p == r {
        3.0
    } else {
        6.0
    }
}

fn permutations(t: [usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = t;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

impl Deviance {
    pub fn zero(n: usize) -> Self {
        Deviance { n, eta: vec![ZERO; n * n * n] }
    }

    /// From polynomial coefficients: each entry is a monomial given by three
    /// (0-based) coframe indices and its coefficient.
    pub fn from_polynomial(n: usize, monomials: &[([usize; 3], Complex64)]) -> Self {
        let mut d = Self::zero(n);
        for &(m, c) in monomials {
            let sigma = c / orderings(m[0], m[1], m[2]);
            let mut seen = Vec::new();
            for p in permutations(m) {
                if seen.contains(&p) {
                    continue;
                }
                seen.push(p);
                let [k, j, h] = p;
                d.eta[idx(n, j, k, h)] += sigma * 2.0;
            }
        }
        d
    }

    /// Complex dimension 2: `(c₁, c₂, c₃, c₄)`.
    pub fn from_cubic(c: [Complex64; 4]) -> Self {
        Self::from_polynomial(2, &[([0, 0, 0], c[0]), ([0, 0, 1], c[1]), ([0, 1, 1], c[2]), ([1, 1, 1], c[3])])
    }

    pub fn from_real_cubic(c: [f64; 4]) -> Self {
        Self::from_cubic(c.map(|x| Complex64::new(x, 0.0)))
    }

    /// From the vector `(x, y, z, w) = (2c₁, 2c₂/3, 2c₃/3, 2c₄)`.
    pub fn from_xyzw(p: [Complex64; 4]) -> Self {
        Self::from_cubic([p[0] / 2.0, p[1] * 1.5, p[2] * 1.5, p[3] / 2.0])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `η^j_{kh}` (0-based).
    pub fn eta(&self, j: usize, k: usize, h: usize) -> Complex64 {
        self.eta[idx(self.n, j, k, h)]
    }

    /// `σ_{pqr} = η^q_{pr} / 2`.
    pub fn sigma(&self, p: usize, q: usize, r: usize) -> Complex64 {
        self.eta(q, p, r) / 2.0
    }

    pub fn is_zero(&self) -> bool {
        self.eta.iter().all(|z| *z == ZERO)
    }

    /// Polynomial coefficients `(c₁..c₄)` for complex dimension 2.
    pub fn cubic(&self) -> Result<[Complex64; 4]> {
        self.require_n2()?;
        Ok([self.sigma(0, 0, 0), self.sigma(0, 0, 1) * 3.0, self.sigma(0, 1, 1) * 3.0, self.sigma(1, 1, 1)])
    }

    /// `(x, y, z, w)`.
    pub fn xyzw(&self) -> Result<[Complex64; 4]> {
        self.require_n2()?;
        Ok([self.eta(0, 0, 0), self.eta(0, 0, 1), self.eta(0, 1, 1), self.eta(1, 1, 1)])
    }

    fn require_n2(&self) -> Result<()> {
        if self.n != 2 {
            return Err(PskError::UnsupportedDimension { expected: 2, got: self.n });
        }
        Ok(())
    }

    /// Largest deviation of `η^j_{kh}` from its permutations.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                for h in 0..n {
                    let base = self.eta(j, k, h);
                    for [a, b, c] in permutations([j, k, h]) {
                        worst = worst.max((self.eta(a, b, c) - base).norm());
                    }
                }
            }
        }
        worst
    }

    /// `v₁ = (x,y)`, `v₂ = (y,z)`, `v₃ = (z,w)`.
    pub fn v_vectors(&self) -> Result<[[Complex64; 2]; 3]> {
        let [x, y, z, w] = self.xyzw()?;
        Ok([[x, y], [y, z], [z, w]])
    }

    /// Blocks of `[η∧η̄]`: `(A_{k̄k'})_{j,h'} = Σ_h conj(η^j_{kh}) η^h_{k'h'}`.
    pub fn bracket(&self) -> CurvatureBlocks {
        let n = self.n;
        CurvatureBlocks::from_fn(n, |k, kp| {
            DMatrix::from_fn(n, n, |j, hp| (0..n).map(|h| self.eta(j, k, h).conj() * self.eta(h, kp, hp)).sum())
        })
    }

    /// The same blocks for complex dimension 2 from pairwise Hermitian
    /// products of `v₁, v₂, v₃`; `A_{2̄1}` is taken as `(A_{1̄2})^†`.
    pub fn bracket_from_v_vectors(&self) -> Result<CurvatureBlocks> {
        let [v1, v2, v3] = self.v_vectors()?;
        let ip = |a: &[Complex64; 2], b: &[Complex64; 2]| a[0].conj() * b[0] + a[1].conj() * b[1];
        let m = |e: [Complex64; 4]| DMatrix::from_row_slice(2, 2, &e);
        let a11 = m([ip(&v1, &v1), ip(&v1, &v2), ip(&v1, &v2).conj(), ip(&v2, &v2)]);
        let a12 = m([ip(&v1, &v2), ip(&v1, &v3), ip(&v2, &v2), ip(&v2, &v3)]);
        let a22 = m([ip(&v2, &v2), ip(&v2, &v3), ip(&v2, &v3).conj(), ip(&v3, &v3)]);
        let a21 = a12.adjoint();
        let blocks = [a11, a12, a21, a22];
        Ok(CurvatureBlocks::from_fn(2, |c, d| blocks[2 * c + d].clone()))
    }

    /// `Σ |η^j_{kh}|²`.
    pub fn norm_sq(&self) -> f64 {
        self.eta.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ η^j_{kh} conj(η^h_{kj})`, equal to [`Self::norm_sq`] by total symmetry.
    pub fn norm_sq_paired(&self) -> Complex64 {
        let n = self.n;
        let mut s = ZERO;
        for j in 0..n {
            for k in 0..n {
                for h in 0..n {
                    s += self.eta(j, k, h) * self.eta(h, k, j).conj();
                }
            }
        }
        s
    }

    /// Multiply the cubic by `e^{iα}`.
    pub fn phase_rotate(&self, alpha: f64) -> Self {
        let u = Complex64::from_polar(1.0, alpha);
        Deviance { n: self.n, eta: self.eta.iter().map(|z| z * u).collect() }
    }

    /// The `T^{1,0}`-to-`T^{0,1}` matrix of 1-forms `E_{jh} = Σ_k η^j_{kh} θ^k`
    /// in the standard frame of real dimension `2n`.
    pub fn form_matrix(&self) -> crate::tensor_core::FormMatrix<Complex64> {
        let n = self.n;
        let coframe = crate::lie_kahler::UnitaryCoframe::standard(2 * n);
        crate::tensor_core::FormMatrix::from_fn(n, n, 2 * n, |j, h| {
            let mut f = AlternatingForm::zero(2 * n, 1);
            for k in 0..n {
                let c = self.eta(j, k, h);
                if c != ZERO {
                    f = &f + &coframe.theta::<Complex64>(k).scale(&c);
                }
            }
            f
        })
    }
}

/// Model curvature tensors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Fubini–Study curvature of complex projective `n`-space.
    Projective(usize),
    /// `−u^{12}` at (1,2), `+u^{12}` at (2,1); real dimension 4.
    H1,
    /// `−u^{34}` at (3,4), `+u^{34}` at (4,3); real dimension 4.
    H2,
}

/// Blocks of the Fubini–Study curvature: `A_{āb} = −E_{ba} − δ_{ab} Id`.
pub fn projective_blocks(n: usize) -> CurvatureBlocks {
    CurvatureBlocks::from_fn(n, |a, b| {
        DMatrix::from_fn(n, n, |p, q| {
            let mut v = 0.0;
            if p == b && q == a {
                v -= 1.0;
            }
            if a == b && p == q {
                v -= 1.0;
            }
            Complex64::new(v, 0.0)
        })
    })
}

fn plane_curvature(i: usize, j: usize) -> CurvatureTensor {
    let mut real = crate::tensor_core::FormMatrix::zeros(4, 4, 4, 2);
    let f = AlternatingForm::monomial(4, &[i, j], Complex64::new(1.0, 0.0));
    real.set(i, j, -&f);
    real.set(j, i, f);
    CurvatureTensor::from_real(real)
}

pub fn model_curvature(kind: ModelKind) -> CurvatureTensor {
    match kind {
        ModelKind::Projective(n) => projective_blocks(n).realify_standard(),
        ModelKind::H1 => plane_curvature(0, 1),
        ModelKind::H2 => plane_curvature(2, 3),
    }
}
