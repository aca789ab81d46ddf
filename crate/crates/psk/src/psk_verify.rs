//! Checks for projective special Kähler structures on Kähler Lie algebras with
//! a left-invariant deviance and a left-invariant potential `λ`, `dλ = ω`:
//!
//! * curvature condition `Ω^LC + Ω_P + [η∧η̄] = 0`,
//! * differential condition `d^LC σ = −4i λ∧σ`,
//! * the Ricci and scalar identities and the scalar lower bound they imply.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::deviance::{projective_blocks, Deviance};
use crate::error::{PskError, Result};
use crate::lie_kahler::{
    complex_matrix, curvature, levi_civita, ricci_scalar, unitary_coframe, CurvatureTensor, KahlerStructure,
    UnitaryCoframe,
};
use crate::tensor_core::{AlternatingForm, FormMatrix};
use crate::TOLERANCE;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Max-abs entry of the blocks of `Ω^LC + Ω_P + [η∧η̄]`.
pub fn d1_residual(rlc: &CurvatureTensor, coframe: &UnitaryCoframe, d: &Deviance) -> Result<f64> {
    let blocks = rlc.complexify(coframe)?;
    if blocks.n() != d.n() {
        return Err(PskError::UnsupportedDimension { expected: blocks.n(), got: d.n() });
    }
    Ok(blocks.add(&projective_blocks(d.n())).add(&d.bracket()).max_abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct D2Result {
    pub feasible: bool,
    /// Minimal-norm potential (real coefficients on the frame covectors).
    pub lambda: Option<AlternatingForm<Complex64>>,
    pub lambda_coefficients: Vec<f64>,
    pub residual: f64,
}

/// Complex connection matrix `M` with `∇θ^a = −Σ_b M_{ab} ⊗ θ^b`.
fn complex_connection(ks: &KahlerStructure, coframe: &UnitaryCoframe) -> FormMatrix<Complex64> {
    complex_matrix(&levi_civita(ks), &coframe.order)
}

/// 1-forms `(∇σ)_{pqr}`, indexed `[(p·n + q)·n + r]`.
fn covariant_sigma(m: &FormMatrix<Complex64>, d: &Deviance) -> Vec<AlternatingForm<Complex64>> {
    let n = d.n();
    let dim = m.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let mut f = AlternatingForm::zero(dim, 1);
                for a in 0..n {
                    for (form, s) in [
                        (m.get(a, p), d.sigma(a, q, r)),
                        (m.get(a, q), d.sigma(p, a, r)),
                        (m.get(a, r), d.sigma(p, q, a)),
                    ] {
                        if s != ZERO {
                            f = &f - &form.scale(&s);
                        }
                    }
                }
                out.push(f);
            }
        }
    }
    out
}

/// Linear system `A l = b` for the real coefficients `l` of `λ`.
struct LinearSystem {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LinearSystem {
    fn new() -> Self {
        LinearSystem { rows: Vec::new(), rhs: Vec::new() }
    }

    /// Adds the real and imaginary parts of `Σ_k l_k a_k = b` componentwise.
    fn push_form_equation(&mut self, coeffs: &[AlternatingForm<Complex64>], rhs: &AlternatingForm<Complex64>) {
        let dim = rhs.dim();
        let mut components: Vec<Vec<usize>> = Vec::new();
        for f in coeffs.iter().chain(std::iter::once(rhs)) {
            for (idx, _) in f.terms() {
                if !components.contains(&idx) {
                    components.push(idx);
                }
            }
        }
        debug_assert!(coeffs.iter().all(|c| c.dim() == dim));
        for idx in components {
            let vals: Vec<Complex64> = coeffs.iter().map(|c| c.coefficient(&idx)).collect();
            let b = rhs.coefficient(&idx);
            self.rows.push(vals.iter().map(|z| z.re).collect());
            self.rhs.push(b.re);
            self.rows.push(vals.iter().map(|z| z.im).collect());
            self.rhs.push(b.im);
        }
    }

    fn solve(&self, unknowns: usize) -> (Vec<f64>, f64) {
        if self.rows.is_empty() {
            return (vec![0.0; unknowns], 0.0);
        }
        let a = DMatrix::from_fn(self.rows.len(), unknowns, |i, j| self.rows[i][j]);
        let b = DVector::from_vec(self.rhs.clone());
        let svd = a.clone().svd(true, true);
        let x = svd.solve(&b, 1e-12).expect("SVD with both factors");
        let residual = (&a * &x - &b).amax();
        (x.iter().copied().collect(), residual)
    }
}

fn d2_system(ks: &KahlerStructure, d: &Deviance, include_potential: bool) -> Result<LinearSystem> {
    let coframe = unitary_coframe(ks)?;
    let n = coframe.n();
    if d.n() != n {
        return Err(PskError::UnsupportedDimension { expected: n, got: d.n() });
    }
    let dim = ks.dim();
    let m = complex_connection(ks, &coframe);
    let nabla = covariant_sigma(&m, d);
    let thetas: Vec<AlternatingForm<Complex64>> = (0..n).map(|p| coframe.theta(p)).collect();
    let mut sys = LinearSystem::new();

    if include_potential {
        let consts = ks.alg.complex_constants();
        let du = consts.covector_differentials();
        sys.push_form_equation(&du, &ks.omega);
    }

    for q in 0..n {
        for r in 0..n {
            let mut base = AlternatingForm::zero(dim, 2);
            let mut coeffs = vec![AlternatingForm::zero(dim, 2); dim];
            for p in 0..n {
                base = &base + &nabla[(p * n + q) * n + r].wedge(&thetas[p]);
                let s = d.sigma(p, q, r);
                if s == ZERO {
                    continue;
                }
                for (k, c) in coeffs.iter_mut().enumerate() {
                    let term = AlternatingForm::basis(dim, k).wedge(&thetas[p]).scale(&(I * 4.0 * s));
                    *c = &*c + &term;
                }
            }
            sys.push_form_equation(&coeffs, &(-&base));
        }
    }
    Ok(sys)
}

fn one_form(dim: usize, coeffs: &[f64]) -> AlternatingForm<Complex64> {
    AlternatingForm::from_terms(
        dim,
        1,
        coeffs.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(k, v)| (vec![k], Complex64::new(*v, 0.0))),
    )
}

/// Snap tiny solver noise to zero so witnesses print cleanly.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

/// Searches a left-invariant real `λ` with `dλ = ω` and `d^LC σ = −4iλ∧σ`.
pub fn d2_check(ks: &KahlerStructure, d: &Deviance) -> Result<D2Result> {
    d2_solve(ks, d, true)
}

/// Only the deviance equation, without `dλ = ω`; diagnostic for why a case fails.
pub fn d2_deviance_only(ks: &KahlerStructure, d: &Deviance) -> Result<D2Result> {
    d2_solve(ks, d, false)
}

fn d2_solve(ks: &KahlerStructure, d: &Deviance, include_potential: bool) -> Result<D2Result> {
    let dim = ks.dim();
    let sys = d2_system(ks, d, include_potential)?;
    let (x, residual) = sys.solve(dim);
    let x: Vec<f64> = x.into_iter().map(clean).collect();
    let scale = 1.0f64.max(sys.rhs.iter().fold(0.0, |m, v| m.max(v.abs())));
    let feasible = residual < TOLERANCE * scale;
    Ok(D2Result {
        feasible,
        lambda: feasible.then(|| one_form(dim, &x)),
        lambda_coefficients: x,
        residual,
    })
}

/// Independent evaluation of the differential condition on the matrix
/// `E_{jh} = Σ_k η^j_{kh} θ^k`: max-abs of `dE + M̄∧E + E∧M + 4iλ∧E`.
pub fn d2_matrix_residual(ks: &KahlerStructure, d: &Deviance, lambda: &AlternatingForm<Complex64>) -> Result<f64> {
    let coframe = unitary_coframe(ks)?;
    let n = coframe.n();
    let dim = ks.dim();
    let m = complex_connection(ks, &coframe);
    let e = FormMatrix::from_fn(n, n, dim, |j, h| {
        let mut f = AlternatingForm::zero(dim, 1);
        for k in 0..n {
            f = &f + &coframe.theta::<Complex64>(k).scale(&d.eta(j, k, h));
        }
        f
    });
    let consts = ks.alg.complex_constants();
    let de = crate::tensor_core::ce_differential_matrix(&e, &consts)?;
    let lam = FormMatrix::diagonal(n, &lambda.scale(&(I * 4.0)));
    let total = &(&(&de + &m.conj().wedge(&e)) + &e.wedge(&m)) + &lam.wedge(&e);
    Ok(total.max_abs())
}

/// Hermitian term `Q(X,Y) = 2 Re Σ η^j_{kh} conj(η^h_{uj}) θ^k(Y) conj(θ^u(X))`
/// on frame vectors.
pub fn deviance_ricci_term(coframe: &UnitaryCoframe, d: &Deviance) -> DMatrix<f64> {
    let n = d.n();
    let dim = coframe.dim();
    let comps = |i: usize| -> Vec<Complex64> {
        let mut e = vec![ZERO; dim];
        e[i] = Complex64::new(1.0, 0.0);
        (0..n).map(|k| coframe.theta::<Complex64>(k).eval1(&e)).collect()
    };
    let mut q = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let xc = comps(x);
        for y in 0..dim {
            let yc = comps(y);
            let mut s = ZERO;
            for j in 0..n {
                for k in 0..n {
                    for h in 0..n {
                        for u in 0..n {
                            s += d.eta(j, k, h) * d.eta(h, u, j).conj() * yc[k] * xc[u].conj();
                        }
                    }
                }
            }
            q[(x, y)] = 2.0 * s.re;
        }
    }
    q
}

/// Max-abs of `Ric + 2(n+1) g − Q` over frame pairs (orthonormal frame).
pub fn ricci_identity(ric: &DMatrix<f64>, coframe: &UnitaryCoframe, d: &Deviance) -> f64 {
    let n = d.n() as f64;
    let dim = ric.nrows();
    let g = DMatrix::<f64>::identity(dim, dim);
    (ric + g * (2.0 * (n + 1.0)) - deviance_ricci_term(coframe, d)).amax()
}

/// `|scal + 2(n+1) − (2/n)‖η‖²|`.
pub fn scalar_identity(scal: f64, n: usize, d: &Deviance) -> f64 {
    let n = n as f64;
    (scal + 2.0 * (n + 1.0) - 2.0 / n * d.norm_sq()).abs()
}

/// Scalar curvature forced by the scalar identity, `−2(n+1) + (2/n)‖η‖²`;
/// never below `−2(n+1)`, with equality exactly for zero deviance.
pub fn scalar_bound_check(n: usize, d: &Deviance) -> f64 {
    let nf = n as f64;
    let scal = -2.0 * (nf + 1.0) + 2.0 / nf * d.norm_sq();
    debug_assert!(scal >= -2.0 * (nf + 1.0));
    scal
}

#[derive(Clone, Debug, PartialEq)]
pub struct PskVerdict {
    pub d1_residual: f64,
    pub d2_feasible: bool,
    pub d2_lambda: Option<AlternatingForm<Complex64>>,
    pub d2_residual: f64,
    pub ricci_residual: f64,
    pub scalar_residual: f64,
    pub scal: f64,
    pub eta_norm_sq: f64,
    pub accepted: bool,
}

impl PskVerdict {
    pub fn rejection_reason(&self) -> Option<&'static str> {
        if self.accepted {
            None
        } else if self.d1_residual >= TOLERANCE {
            Some("D1 unsolvable")
        } else {
            Some("D2 infeasible")
        }
    }
}

pub fn verify(ks: &KahlerStructure, d: &Deviance) -> Result<PskVerdict> {
    let report = ks.kahler_check();
    if !report.passes(TOLERANCE) {
        return Err(PskError::Precondition(format!("not Kähler (worst residual {:e})", report.worst())));
    }
    let coframe = unitary_coframe(ks)?;
    let r = curvature(&levi_civita(ks), &ks.alg);
    let d1 = d1_residual(&r, &coframe, d)?;
    let d2 = d2_check(ks, d)?;
    let (ric, scal) = ricci_scalar(&r);
    Ok(PskVerdict {
        d1_residual: d1,
        d2_feasible: d2.feasible,
        d2_lambda: d2.lambda,
        d2_residual: d2.residual,
        ricci_residual: ricci_identity(&ric, &coframe, d),
        scalar_residual: scalar_identity(scal, d.n(), d),
        scal,
        eta_norm_sq: d.norm_sq(),
        accepted: d1 < TOLERANCE && d2.feasible,
    })
}
