//! Kähler Lie algebras in a g-orthonormal frame: validation, Levi-Civita
//! connection from the Koszul formula, curvature, Ricci tensor, and the
//! translation between real curvature matrices and complex block form.
//!
//! The curvature sign is calibrated so that the algebra `[e1,e2] = a e2`
//! (a hyperbolic plane) yields `+a² H₁`, where `H₁` has `−u^{12}` in slot
//! (1,2) and `+u^{12}` in slot (2,1).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{PskError, Result};
use crate::tensor_core::{ce_differential, ce_differential_matrix, AlternatingForm, FormMatrix, Scalar, StructureConstants};
use crate::TOLERANCE;

/// Real Lie algebra given by structure constants in a chosen frame.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<f64>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, c: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}` with `[e_i,e_j] = Σ_k c^k_{ij} e_k` (0-based).
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[(k * self.dim + i) * self.dim + j]
    }

    /// Sets `c^k_{ij} = value` and `c^k_{ji} = −value`.
    pub fn set(&mut self, k: usize, i: usize, j: usize, value: f64) {
        let d = self.dim;
        self.c[(k * d + i) * d + j] = value;
        self.c[(k * d + j) * d + i] = -value;
    }

    /// Builder form of [`Self::set`] for a whole bracket `[e_i,e_j] = Σ v_k e_k`.
    pub fn with_bracket(mut self, i: usize, j: usize, terms: &[(usize, f64)]) -> Self {
        for &(k, v) in terms {
            let old = self.get(k, i, j);
            self.set(k, i, j, old + v);
        }
        self
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += x[i] * y[j] * self.get(k, i, j);
                }
            }
        }
        out
    }

    /// Largest component of the cyclic Jacobi sum over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            s += self.get(m, i, j) * self.get(l, m, k)
                                + self.get(m, j, k) * self.get(l, m, i)
                                + self.get(m, k, i) * self.get(l, m, j);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn constants<C: Scalar>(&self, lift: impl Fn(f64) -> C) -> StructureConstants<C> {
        let d = self.dim;
        let mut sc = StructureConstants::zero(d);
        for k in 0..d {
            for i in 0..d {
                for j in i + 1..d {
                    let v = self.get(k, i, j);
                    if v != 0.0 {
                        sc.set(k, i, j, lift(v));
                    }
                }
            }
        }
        sc
    }

    pub fn complex_constants(&self) -> StructureConstants<Complex64> {
        self.constants(|v| Complex64::new(v, 0.0))
    }

    /// Chevalley–Eilenberg differential of a left-invariant form on this algebra.
    pub fn d(&self, form: &AlternatingForm<Complex64>) -> Result<AlternatingForm<Complex64>> {
        ce_differential(form, &self.complex_constants())
    }
}

/// Lie algebra with an orthonormal frame, a complex structure and its Kähler form.
#[derive(Clone, Debug, PartialEq)]
pub struct KahlerStructure {
    pub alg: LieAlgebra,
    /// Matrix of `I` in the frame: `I e_j = Σ_i imat[(i,j)] e_i`.
    pub imat: DMatrix<f64>,
    pub omega: AlternatingForm<Complex64>,
}

/// `I e_{2k-1} = e_{2k}` in 1-based numbering.
pub fn standard_complex_structure(dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        m[(2 * k + 1, 2 * k)] = 1.0;
        m[(2 * k, 2 * k + 1)] = -1.0;
    }
    m
}

/// `ω(e_i,e_j) = g(I e_i, e_j) = imat[(j,i)]`.
pub fn kahler_form(imat: &DMatrix<f64>) -> AlternatingForm<Complex64> {
    let d = imat.nrows();
    let mut f = AlternatingForm::zero(d, 2);
    for i in 0..d {
        for j in i + 1..d {
            let v = imat[(j, i)];
            if v != 0.0 {
                f = &f + &AlternatingForm::monomial(d, &[i, j], Complex64::new(v, 0.0));
            }
        }
    }
    f
}

#[derive(Clone, Debug, PartialEq)]
pub struct KahlerReport {
    pub d_omega: f64,
    pub nijenhuis: f64,
    pub compat: f64,
    pub closed_ok: bool,
}

impl KahlerReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.d_omega < tol && self.nijenhuis < tol && self.compat < tol
    }

    pub fn worst(&self) -> f64 {
        self.d_omega.max(self.nijenhuis).max(self.compat)
    }
}

impl KahlerStructure {
    pub fn new(alg: LieAlgebra, imat: DMatrix<f64>) -> Self {
        let omega = kahler_form(&imat);
        KahlerStructure { alg, imat, omega }
    }

    /// Structure with the complex structure `I e_{2k-1} = e_{2k}`.
    pub fn standard(alg: LieAlgebra) -> Self {
        let imat = standard_complex_structure(alg.dim());
        Self::new(alg, imat)
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn complex_dim(&self) -> usize {
        self.alg.dim() / 2
    }

    fn apply_i(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.imat[(i, j)] * v[j]).sum()).collect()
    }

    pub fn kahler_check(&self) -> KahlerReport {
        let d = self.dim();
        let d_omega = self.alg.d(&self.omega).map(|f| f.max_abs()).unwrap_or(f64::INFINITY);

        let basis = |i: usize| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        };
        let mut nijenhuis: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let (x, y) = (basis(i), basis(j));
                let (ix, iy) = (self.apply_i(&x), self.apply_i(&y));
                let t1 = self.alg.bracket(&ix, &iy);
                let t2 = self.apply_i(&self.alg.bracket(&ix, &y));
                let t3 = self.apply_i(&self.alg.bracket(&x, &iy));
                let t4 = self.alg.bracket(&x, &y);
                for k in 0..d {
                    nijenhuis = nijenhuis.max((t1[k] - t2[k] - t3[k] - t4[k]).abs());
                }
            }
        }

        let id = DMatrix::<f64>::identity(d, d);
        let square = (&self.imat * &self.imat + &id).abs().max();
        let orth = (self.imat.transpose() * &self.imat - &id).abs().max();
        let form_mismatch = (&kahler_form(&self.imat) - &self.omega).max_abs();
        let compat = square.max(orth).max(form_mismatch);

        KahlerReport { d_omega, nijenhuis, compat, closed_ok: d_omega < TOLERANCE }
    }
}

/// Koszul formula in an orthonormal frame: `Γ^k_{ij} = ½(c^k_{ij} − c^i_{jk} + c^j_{ki})`
/// and `(ω^LC)^k_j = Σ_i Γ^k_{ij} u^i`, so that `∇e_j = Σ_k (ω^LC)^k_j ⊗ e_k`.
pub fn koszul<C: Scalar>(consts: &StructureConstants<C>) -> FormMatrix<C> {
    let d = consts.dim();
    let half = C::from_ratio(1, 2);
    FormMatrix::from_fn(d, d, d, |k, j| {
        let mut f = AlternatingForm::zero(d, 1);
        for i in 0..d {
            let g = half.clone() * (consts.get(k, i, j).clone() - consts.get(i, j, k).clone() + consts.get(j, k, i).clone());
            if !g.is_zero() {
                f = &f + &AlternatingForm::monomial(d, &[i], g);
            }
        }
        f
    })
}

pub fn levi_civita(ks: &KahlerStructure) -> FormMatrix<Complex64> {
    koszul(&ks.alg.complex_constants())
}

/// Column of frame covectors `(u^1, …, u^d)`.
pub fn coframe_column<C: Scalar>(dim: usize) -> FormMatrix<C> {
    FormMatrix::from_fn(dim, 1, dim, |k, _| AlternatingForm::basis(dim, k))
}

/// Max-abs coefficient of `du^k + Σ_j ω^k_j ∧ u^j`.
pub fn torsion_residual<C: Scalar>(conn: &FormMatrix<C>, consts: &StructureConstants<C>) -> f64 {
    let d = consts.dim();
    let col = coframe_column::<C>(d);
    let du = ce_differential_matrix(&col, consts).expect("frame mismatch");
    (&du + &conn.wedge(&col)).max_abs()
}

/// Max-abs of `ω_{ij} + ω_{ji}` (orthonormal frame).
pub fn metric_residual<C: Scalar>(conn: &FormMatrix<C>) -> f64 {
    (conn + &conn.transpose()).max_abs()
}

/// `dω + ω∧ω`.
pub fn curvature_form<C: Scalar>(conn: &FormMatrix<C>, consts: &StructureConstants<C>) -> FormMatrix<C> {
    let d_conn = ce_differential_matrix(conn, consts).expect("frame mismatch");
    &d_conn + &conn.wedge(conn)
}

/// Endomorphism-valued 2-form `R^l_k` in a real orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    real: FormMatrix<Complex64>,
}

impl CurvatureTensor {
    pub fn from_real(real: FormMatrix<Complex64>) -> Self {
        assert_eq!(real.rows(), real.cols());
        CurvatureTensor { real }
    }

    pub fn zero(dim: usize) -> Self {
        CurvatureTensor { real: FormMatrix::zeros(dim, dim, dim, 2) }
    }

    pub fn real(&self) -> &FormMatrix<Complex64> {
        &self.real
    }

    pub fn dim(&self) -> usize {
        self.real.rows()
    }

    pub fn scale(&self, s: f64) -> Self {
        CurvatureTensor { real: self.real.scale(&Complex64::new(s, 0.0)) }
    }

    pub fn max_abs(&self) -> f64 {
        self.real.max_abs()
    }

    /// Max-abs of the first Bianchi identity `Σ_k R^l_k ∧ u^k`.
    pub fn bianchi_residual(&self) -> f64 {
        let d = self.dim();
        self.real.wedge(&coframe_column(d)).max_abs()
    }

    /// Max-abs of `R_{lk} + R_{kl}` (antisymmetry after lowering).
    pub fn antisymmetry_residual(&self) -> f64 {
        (&self.real + &self.real.transpose()).max_abs()
    }

    /// Complex block presentation with respect to `coframe`.
    pub fn complexify(&self, coframe: &UnitaryCoframe) -> Result<CurvatureBlocks> {
        let n = coframe.n();
        let o = &coframe.order;
        let r = &self.real;
        let scale = 1.0f64.max(r.max_abs());
        let mut off_type: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let d1 = r.get(o[2 * a + 1], o[2 * b + 1]) - r.get(o[2 * a], o[2 * b]);
                let d2 = r.get(o[2 * a], o[2 * b + 1]) + r.get(o[2 * a + 1], o[2 * b]);
                off_type = off_type.max(d1.max_abs()).max(d2.max_abs());
            }
        }
        let m = complex_matrix(r, o);
        let mut blocks = vec![DMatrix::zeros(n, n); n * n];
        for a in 0..n {
            for b in 0..n {
                let mab = m.get(a, b);
                for c in 0..n {
                    for d in 0..n {
                        let (tc, td) = (coframe.vector(c), coframe.vector(d));
                        let (tcb, tdb) = (conj_vec(&tc), conj_vec(&td));
                        blocks[c * n + d][(a, b)] = mab.eval2(&tcb, &td);
                        off_type = off_type.max(mab.eval2(&tc, &td).magnitude()).max(mab.eval2(&tcb, &tdb).magnitude());
                    }
                }
            }
        }
        if off_type > TOLERANCE * scale {
            return Err(PskError::NotKahlerCurvature(off_type));
        }
        Ok(CurvatureBlocks { n, blocks })
    }
}

fn conj_vec(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|c| c.conj()).collect()
}

/// The `n×n` matrix of complex forms `M_{ab} = R_{2a-1,2b-1} + i R_{2a,2b-1}`
/// (frame positions taken through `order`). For a real matrix commuting with
/// `I` this is the complex-linear endomorphism on `T^{1,0}` in the basis dual
/// to the unitary coframe.
pub fn complex_matrix<C: Scalar>(real: &FormMatrix<C>, order: &[usize]) -> FormMatrix<C> {
    let n = order.len() / 2;
    let i = C::imag_unit();
    FormMatrix::from_fn(n, n, real.dim(), |a, b| {
        real.get(order[2 * a], order[2 * b]) + &real.get(order[2 * a + 1], order[2 * b]).scale(&i)
    })
}

/// Unitary coframe `θ^k = u^{o(2k-1)} + i u^{o(2k)}` for a frame ordering `o`
/// with `I e_{o(2k-1)} = e_{o(2k)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryCoframe {
    pub order: Vec<usize>,
    dim: usize,
}

impl UnitaryCoframe {
    pub fn standard(dim: usize) -> Self {
        UnitaryCoframe { order: (0..dim).collect(), dim }
    }

    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_standard(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &o)| i == o)
    }

    /// The complex covector `θ^k` (0-based `k`).
    pub fn theta<C: Scalar>(&self, k: usize) -> AlternatingForm<C> {
        let re = AlternatingForm::basis(self.dim, self.order[2 * k]);
        let im = AlternatingForm::basis(self.dim, self.order[2 * k + 1]);
        &re + &im.scale(&C::imag_unit())
    }

    /// The vector `θ_k = ½(e_{o(2k-1)} − i e_{o(2k)})` dual to `θ^k`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        v[self.order[2 * k]] = Complex64::new(0.5, 0.0);
        v[self.order[2 * k + 1]] = Complex64::new(0.0, -0.5);
        v
    }
}

/// Finds a frame ordering adapted to `I`; requires every column of `imat` to be `±e_j`.
pub fn unitary_coframe(ks: &KahlerStructure) -> Result<UnitaryCoframe> {
    let d = ks.dim();
    if !d.is_multiple_of(2) {
        return Err(PskError::FrameNotAdapted);
    }
    let mut used = vec![false; d];
    let mut order = Vec::with_capacity(d);
    for j in 0..d {
        if used[j] {
            continue;
        }
        let col = ks.imat.column(j);
        let nonzero: Vec<usize> = (0..d).filter(|&i| col[i].abs() > TOLERANCE).collect();
        if nonzero.len() != 1 {
            return Err(PskError::FrameNotAdapted);
        }
        let i = nonzero[0];
        if used[i] || i == j || (col[i].abs() - 1.0).abs() > TOLERANCE {
            return Err(PskError::FrameNotAdapted);
        }
        if col[i] > 0.0 {
            order.extend([j, i]);
        } else {
            order.extend([i, j]);
        }
        used[i] = true;
        used[j] = true;
    }
    Ok(UnitaryCoframe { order, dim: d })
}

/// Complex blocks `A_{c̄d}` (each `n×n`) with `R = Σ θ̄^c∧θ^d ⊗ A_{c̄d}` on `T^{1,0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureBlocks {
    n: usize,
    blocks: Vec<DMatrix<Complex64>>,
}

impl CurvatureBlocks {
    pub fn zero(n: usize) -> Self {
        CurvatureBlocks { n, blocks: vec![DMatrix::zeros(n, n); n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> DMatrix<Complex64>) -> Self {
        let mut blocks = Vec::with_capacity(n * n);
        for c in 0..n {
            for d in 0..n {
                let b = f(c, d);
                assert_eq!(b.shape(), (n, n));
                blocks.push(b);
            }
        }
        CurvatureBlocks { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `A_{c̄d}` (0-based).
    pub fn get(&self, c: usize, d: usize) -> &DMatrix<Complex64> {
        &self.blocks[c * self.n + d]
    }

    pub fn get_mut(&mut self, c: usize, d: usize) -> &mut DMatrix<Complex64> {
        &mut self.blocks[c * self.n + d]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        CurvatureBlocks { n: self.n, blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        CurvatureBlocks { n: self.n, blocks: self.blocks.iter().map(|b| b * Complex64::new(s, 0.0)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.iter()).map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max)
    }

    /// Max-abs of `A_{c̄d} − (A_{d̄c})^†`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for c in 0..n {
            for d in 0..n {
                let diff = self.get(c, d) - self.get(d, c).adjoint();
                worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }

    /// Real curvature matrix in the frame described by `coframe`.
    pub fn realify(&self, coframe: &UnitaryCoframe) -> CurvatureTensor {
        let n = self.n;
        let dim = coframe.dim();
        let o = &coframe.order;
        let mut real = FormMatrix::zeros(dim, dim, dim, 2);
        for a in 0..n {
            for b in 0..n {
                let mut m = AlternatingForm::<Complex64>::zero(dim, 2);
                for c in 0..n {
                    for d in 0..n {
                        let z = self.get(c, d)[(a, b)];
                        if z == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let pair = coframe.theta::<Complex64>(c).conj().wedge(&coframe.theta(d));
                        m = &m + &pair.scale(&z);
                    }
                }
                let re = m.map(|z| Complex64::new(z.re, 0.0));
                let im = m.map(|z| Complex64::new(z.im, 0.0));
                real.set(o[2 * a], o[2 * b], re.clone());
                real.set(o[2 * a + 1], o[2 * b + 1], re);
                real.set(o[2 * a + 1], o[2 * b], im.clone());
                real.set(o[2 * a], o[2 * b + 1], -im);
            }
        }
        CurvatureTensor { real }
    }

    pub fn realify_standard(&self) -> CurvatureTensor {
        self.realify(&UnitaryCoframe::standard(2 * self.n))
    }
}

pub fn curvature(conn: &FormMatrix<Complex64>, alg: &LieAlgebra) -> CurvatureTensor {
    CurvatureTensor { real: curvature_form(conn, &alg.complex_constants()) }
}

/// Ricci tensor `Ric_{jk} = Σ_i R^i_k(e_i, e_j)` and the dimension-normalized
/// scalar `tr(Ric)/dim`.
pub fn ricci_scalar(r: &CurvatureTensor) -> (DMatrix<f64>, f64) {
    let d = r.dim();
    let e = |i: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[i] = Complex64::new(1.0, 0.0);
        v
    };
    let mut ric = DMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            let mut s = 0.0;
            for i in 0..d {
                s += r.real().get(i, k).eval2(&e(i), &e(j)).re;
            }
            ric[(j, k)] = s;
        }
    }
    let scal = ric.trace() / d as f64;
    (ric, scal)
}
