use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::exact::Exact;
use super::ring::RingElem;
use crate::deviance::{projective_blocks, Deviance};
use crate::error::{PskError, Result};
use crate::lie_kahler::{complex_matrix, curvature_form, koszul, unitary_coframe, CurvatureBlocks, KahlerStructure, UnitaryCoframe};
use crate::tensor_core::{ce_differential, ce_differential_matrix, AlternatingForm, FormMatrix, Scalar, StructureConstants};

/// Coefficients on the total space.
pub type Coeff = RingElem<Exact>;
/// Forms over `{π*u¹, …, π*u^{2n}, dr, dϑ}` with ring coefficients.
pub type LiftedForm = AlternatingForm<Coeff>;
pub type LiftedMatrix = FormMatrix<Coeff>;

type BaseForm = AlternatingForm<Exact>;
type BaseMatrix = FormMatrix<Exact>;

/// Exact data of a Kähler Lie algebra in a standard unitary frame together
/// with a potential `λ` (`dλ = ω`) and a deviance.
#[derive(Clone, Debug)]
pub struct ExactBase {
    n: usize,
    consts: StructureConstants<Exact>,
    omega: BaseForm,
    lambda: BaseForm,
    /// `η^j_{kh}` at `(j·n + k)·n + h`.
    eta: Vec<Exact>,
}

fn snap_form(f: &AlternatingForm<Complex64>) -> Result<BaseForm> {
    f.try_map(|z| Exact::snap(*z))
}

fn standard_kahler_form(dim: usize) -> BaseForm {
    (0..dim / 2).fold(BaseForm::zero(dim, 2), |acc, k| &acc + &BaseForm::monomial(dim, &[2 * k, 2 * k + 1], Exact::one()))
}

impl ExactBase {
    /// Snaps floating point data to exact surds; the frame must be the
    /// standard unitary frame (`I e_{2k-1} = e_{2k}`).
    pub fn snap(ks: &KahlerStructure, lambda: &AlternatingForm<Complex64>, d: &Deviance) -> Result<Self> {
        let coframe = unitary_coframe(ks)?;
        if !coframe.is_standard() {
            return Err(PskError::FrameNotAdapted);
        }
        let n = coframe.n();
        if d.n() != n {
            return Err(PskError::UnsupportedDimension { expected: n, got: d.n() });
        }
        let consts = ks.alg.complex_constants().try_map(|z| Exact::snap(*z))?;
        let mut eta = Vec::with_capacity(n * n * n);
        for j in 0..n {
            for k in 0..n {
                for h in 0..n {
                    eta.push(Exact::snap(d.eta(j, k, h))?);
                }
            }
        }
        Self::new(consts, snap_form(&ks.omega)?, snap_form(lambda)?, eta)
    }

    /// Checks `dλ = ω` exactly.
    pub fn new(consts: StructureConstants<Exact>, omega: BaseForm, lambda: BaseForm, eta: Vec<Exact>) -> Result<Self> {
        let dim = consts.dim();
        let n = dim / 2;
        if !dim.is_multiple_of(2) || omega.dim() != dim || lambda.dim() != dim || eta.len() != n * n * n {
            return Err(PskError::ShapeMismatch("inconsistent base data".into()));
        }
        if !(&ce_differential(&lambda, &consts)? - &omega).is_zero() {
            return Err(PskError::Precondition("dλ ≠ ω on the base".into()));
        }
        Ok(ExactBase { n, consts, omega, lambda, eta })
    }

    /// The base with the standard Kähler form and no deviance.
    pub fn with_potential(consts: StructureConstants<Exact>, lambda: BaseForm) -> Result<Self> {
        let dim = consts.dim();
        let n = dim / 2;
        Self::new(consts, standard_kahler_form(dim), lambda, vec![Exact::zero(); n * n * n])
    }

    /// The degenerate base of complex dimension zero.
    pub fn point() -> Self {
        ExactBase {
            n: 0,
            consts: StructureConstants::zero(0),
            omega: BaseForm::zero(0, 2),
            lambda: BaseForm::zero(0, 1),
            eta: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self, j: usize, k: usize, h: usize) -> &Exact {
        &self.eta[(j * self.n + k) * self.n + h]
    }

    fn dim(&self) -> usize {
        2 * self.n
    }

    fn theta(&self, k: usize) -> BaseForm {
        UnitaryCoframe::standard(self.dim()).theta(k)
    }

    /// Complex Levi-Civita matrix `M` with `dθ = −M∧θ`.
    fn connection(&self) -> BaseMatrix {
        let order: Vec<usize> = (0..self.dim()).collect();
        complex_matrix(&koszul(&self.consts), &order)
    }

    fn curvature(&self) -> BaseMatrix {
        let order: Vec<usize> = (0..self.dim()).collect();
        complex_matrix(&curvature_form(&koszul(&self.consts), &self.consts), &order)
    }

    /// `Σ_{c,d} A_{c̄d} θ̄^c∧θ^d` for integer-valued blocks.
    fn block_forms(&self, blocks: impl Fn(usize, usize, usize, usize) -> Exact) -> BaseMatrix {
        let n = self.n;
        let dim = self.dim();
        FormMatrix::from_fn(n, n, dim, |a, b| {
            let mut f = BaseForm::zero(dim, 2);
            for c in 0..n {
                for d in 0..n {
                    let v = blocks(c, d, a, b);
                    if !v.is_zero() {
                        f = &f + &self.theta(c).conj().wedge(&self.theta(d)).scale(&v);
                    }
                }
            }
            f
        })
    }

    fn projective(&self) -> BaseMatrix {
        let p: CurvatureBlocks = projective_blocks(self.n);
        self.block_forms(|c, d, a, b| Exact::from_int(p.get(c, d)[(a, b)].re.round() as i64))
    }

    /// `[η∧η̄]` with blocks `A_{c̄d}(a,b) = Σ_h conj(η^a_{ch}) η^h_{db}`.
    fn bracket(&self) -> BaseMatrix {
        let n = self.n;
        self.block_forms(|c, d, a, b| {
            (0..n).fold(Exact::zero(), |acc, h| acc + self.eta(a, c, h).conj() * self.eta(h, d, b).clone())
        })
    }

    fn deviance_matrix(&self) -> BaseMatrix {
        let n = self.n;
        let dim = self.dim();
        FormMatrix::from_fn(n, n, dim, |j, h| {
            (0..n).fold(BaseForm::zero(dim, 1), |acc, k| &acc + &self.theta(k).scale(self.eta(j, k, h)))
        })
    }

    /// `dE + M̄∧E + E∧M + 4iλ∧E`, zero exactly when the deviance condition holds.
    fn deviance_derivative(&self) -> Result<BaseMatrix> {
        let e = self.deviance_matrix();
        let m = self.connection();
        let de = ce_differential_matrix(&e, &self.consts)?;
        let four_i = Exact::from_int(4) * Exact::imag_unit();
        let lam = FormMatrix::diagonal(self.n, &self.lambda.scale(&four_i));
        Ok(&(&(&de + &m.conj().wedge(&e)) + &e.wedge(&m)) + &lam.wedge(&e))
    }
}

/// Size of a residual in the ring: exact zero test plus max-abs coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingResidual {
    pub exact_zero: bool,
    pub max_abs: f64,
}

impl RingResidual {
    fn of_matrix(m: &LiftedMatrix) -> Self {
        RingResidual { exact_zero: m.is_zero(), max_abs: m.max_abs() }
    }

    fn of_form(f: &LiftedForm) -> Self {
        RingResidual { exact_zero: f.is_zero(), max_abs: f.max_abs() }
    }

    fn of_tensor(t: &SymTensor) -> Self {
        RingResidual { exact_zero: t.is_zero(), max_abs: t.max_abs() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatReport {
    /// `dW + W∧W` for `W = [[ω̃, Ē],[Ẽ, conj ω̃]]`.
    pub curvature: RingResidual,
    /// Lower-left block minus `e^{2iϑ} π*(d^LC E + 4iλ∧E)`.
    pub deviance_identity: RingResidual,
    /// `conj(Ẽ)∧Ẽ` minus `π*[η∧η̄]`.
    pub bracket_identity: RingResidual,
    /// Every lifted cubic coefficient is a multiple of `r²e^{2iϑ}`.
    pub homogeneous: bool,
}

impl FlatReport {
    pub fn exact_zero(&self) -> bool {
        self.curvature.exact_zero && self.deviance_identity.exact_zero && self.bracket_identity.exact_zero && self.homogeneous
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    /// `∇^LC ξ − id`.
    pub lc_xi: RingResidual,
    /// `∇ξ − id` for the flat connection.
    pub flat_xi: RingResidual,
    /// `∇(Ĩξ) − Ĩ` for the flat connection.
    pub flat_i_xi: RingResidual,
    /// `L_ξ g̃ − 2g̃`.
    pub homothety: RingResidual,
    /// `g̃ − (r²π*g − r²φ̃² − dr²)`.
    pub metric_identity: RingResidual,
    /// `ω̃ − (r²π*ω + rφ̃∧dr)`.
    pub kahler_identity: RingResidual,
    /// `dω̃`.
    pub kahler_closed: RingResidual,
    /// `dμ − ι_{Ĩξ}ω̃` with `μ = r²/2`.
    pub moment_map: RingResidual,
    /// `ι_ξ ω̃ + r²φ̃`.
    pub euler_contraction: RingResidual,
    /// `dφ̃ + 2π*ω`.
    pub fibre_curvature: RingResidual,
    /// `ω̃ + Jω̃^†J` with `J = diag(1, …, 1, −1)`.
    pub anti_hermitian: RingResidual,
    /// `(positive, negative)` eigenvalue counts of `g̃` at `r = 1, ϑ = 0`.
    pub signature: (usize, usize),
    pub expected_signature: (usize, usize),
}

impl InvariantReport {
    pub fn residuals(&self) -> [(&'static str, RingResidual); 11] {
        [
            ("nabla_lc_xi", self.lc_xi),
            ("nabla_xi", self.flat_xi),
            ("nabla_i_xi", self.flat_i_xi),
            ("homothety", self.homothety),
            ("metric_identity", self.metric_identity),
            ("kahler_identity", self.kahler_identity),
            ("kahler_closed", self.kahler_closed),
            ("moment_map", self.moment_map),
            ("euler_contraction", self.euler_contraction),
            ("fibre_curvature", self.fibre_curvature),
            ("anti_hermitian", self.anti_hermitian),
        ]
    }

    pub fn exact_zero(&self) -> bool {
        self.residuals().iter().all(|(_, r)| r.exact_zero) && self.signature == self.expected_signature
    }
}

/// Symmetric 2-tensor as a full symmetric matrix over the generators.
#[derive(Clone, Debug, PartialEq)]
struct SymTensor {
    dim: usize,
    entries: Vec<Coeff>,
}

impl SymTensor {
    fn zero(dim: usize) -> Self {
        SymTensor { dim, entries: vec![Coeff::zero(); dim * dim] }
    }

    /// `½(α⊗β + β⊗α)`.
    fn product(a: &LiftedForm, b: &LiftedForm) -> Self {
        let dim = a.dim();
        let half = Coeff::from_ratio(1, 2);
        let ca: Vec<Coeff> = (0..dim).map(|i| a.coefficient(&[i])).collect();
        let cb: Vec<Coeff> = (0..dim).map(|i| b.coefficient(&[i])).collect();
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.entries[i * dim + j] = half.clone() * (ca[i].clone() * cb[j].clone() + ca[j].clone() * cb[i].clone());
            }
        }
        t
    }

    fn add(&self, other: &Self) -> Self {
        SymTensor { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    fn scale(&self, c: &Coeff) -> Self {
        SymTensor { dim: self.dim, entries: self.entries.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn max_abs(&self) -> f64 {
        self.entries.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    fn gram_at_unit(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.entries[i * self.dim + j].at_unit().to_complex().re)
    }
}

/// Conic lift `M × ℝ⁺ × S¹` of a projective special Kähler candidate.
#[derive(Clone, Debug)]
pub struct ConicLift {
    base: ExactBase,
    dim: usize,
    generator_d: Vec<LiftedForm>,
    phi: LiftedForm,
    theta: LiftedMatrix,
    connection: LiftedMatrix,
}

impl ConicLift {
    pub fn new(ks: &KahlerStructure, lambda: &AlternatingForm<Complex64>, d: &Deviance) -> Result<Self> {
        Ok(Self::from_base(ExactBase::snap(ks, lambda, d)?))
    }

    pub fn from_base(base: ExactBase) -> Self {
        let n = base.n;
        let dim = 2 * n + 2;
        let mut generator_d: Vec<LiftedForm> = base.consts.covector_differentials().iter().map(|f| pull(f, dim)).collect();
        generator_d.push(LiftedForm::zero(dim, 2));
        generator_d.push(LiftedForm::zero(dim, 2));
        let mut lift = ConicLift {
            base,
            dim,
            generator_d,
            phi: LiftedForm::zero(dim, 1),
            theta: LiftedMatrix::zeros(n + 1, 1, dim, 1),
            connection: LiftedMatrix::zeros(n + 1, n + 1, dim, 1),
        };
        lift.phi = &lift.dtheta() - &lift.pull(&lift.base.lambda).scale(&Coeff::from_int(2));
        lift.theta = lift.build_coframe();
        lift.connection = lift.build_connection();
        lift
    }

    pub fn base(&self) -> &ExactBase {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dr(&self) -> LiftedForm {
        LiftedForm::basis(self.dim, self.dim - 2)
    }

    pub fn dtheta(&self) -> LiftedForm {
        LiftedForm::basis(self.dim, self.dim - 1)
    }

    /// `φ̃ = dϑ − 2π*λ`.
    pub fn phi(&self) -> &LiftedForm {
        &self.phi
    }

    /// Column `(rπ*θ¹, …, rπ*θⁿ, dr + irφ̃)`.
    pub fn coframe(&self) -> &LiftedMatrix {
        &self.theta
    }

    /// Levi-Civita connection matrix in the lifted unitary coframe.
    pub fn connection(&self) -> &LiftedMatrix {
        &self.connection
    }

    pub fn pull(&self, f: &BaseForm) -> LiftedForm {
        pull(f, self.dim)
    }

    fn pull_matrix(&self, m: &BaseMatrix) -> LiftedMatrix {
        FormMatrix::from_fn(m.rows(), m.cols(), self.dim, |i, j| self.pull(m.get(i, j)))
    }

    /// Exterior derivative on the total space.
    pub fn d(&self, f: &LiftedForm) -> LiftedForm {
        let dr = self.dr();
        let dt = self.dtheta();
        f.exterior_d(&self.generator_d, |c| &dr.scale(&c.d_r()) + &dt.scale(&c.d_theta()))
    }

    pub fn d_matrix(&self, m: &LiftedMatrix) -> LiftedMatrix {
        m.map(|f| self.d(f))
    }

    fn i_phi(&self) -> LiftedForm {
        self.phi.scale(&Coeff::imag_unit())
    }

    fn build_coframe(&self) -> LiftedMatrix {
        let n = self.n();
        let r = Coeff::r();
        FormMatrix::from_fn(n + 1, 1, self.dim, |k, _| {
            if k < n {
                self.pull(&self.base.theta(k)).scale(&r)
            } else {
                &self.dr() + &self.i_phi().scale(&r)
            }
        })
    }

    fn build_connection(&self) -> LiftedMatrix {
        let n = self.n();
        let m = self.pull_matrix(&self.base.connection());
        let i_phi = self.i_phi();
        FormMatrix::from_fn(n + 1, n + 1, self.dim, |a, b| match (a < n, b < n) {
            (true, true) if a == b => m.get(a, b) + &i_phi,
            (true, true) => m.get(a, b).clone(),
            (true, false) => self.pull(&self.base.theta(a)),
            (false, true) => self.pull(&self.base.theta(b)).conj(),
            (false, false) => i_phi.clone(),
        })
    }

    /// `dθ̃ + ω̃∧θ̃` for the lifted connection.
    pub fn torsion_residual(&self) -> RingResidual {
        self.torsion_residual_of(&self.connection)
    }

    /// `dθ̃ + conn∧θ̃` for an arbitrary connection matrix.
    pub fn torsion_residual_of(&self, conn: &LiftedMatrix) -> RingResidual {
        RingResidual::of_matrix(&(&self.d_matrix(&self.theta) + &conn.wedge(&self.theta)))
    }

    /// `dω̃ + ω̃∧ω̃`.
    pub fn curvature(&self) -> LiftedMatrix {
        &self.d_matrix(&self.connection) + &self.connection.wedge(&self.connection)
    }

    /// Curvature minus `π*(Ω^LC + Ω_P)` in the upper block and zero elsewhere,
    /// with 2-forms expanded in the generator basis (the `r²` of the
    /// lifted-coframe basis is absorbed by `θ̃ = rπ*θ`).
    pub fn lift_curvature_check(&self) -> RingResidual {
        RingResidual::of_matrix(&(&self.curvature() - &self.expected_curvature()))
    }

    fn expected_curvature(&self) -> LiftedMatrix {
        let n = self.n();
        let inner = self.pull_matrix(&(&self.base.curvature() + &self.base.projective()));
        pad(&inner, n + 1, self.dim, 2, |m, a, b| m.get(a, b).clone())
    }

    /// `η̃^j_{kh}` as ring elements, obtained from the lifted cubic
    /// `σ̃ = r²e^{2iϑ}π*σ` by raising an index with `g̃`.
    fn lifted_cubic(&self) -> Vec<Coeff> {
        let z2 = Coeff::monomial(2, 2, Exact::one());
        self.base.eta.iter().map(|e| z2.clone() * Coeff::constant(e.clone()) * Coeff::from_ratio(1, 2)).collect()
    }

    fn lifted_deviance(&self) -> LiftedMatrix {
        let n = self.n();
        let sigma = self.lifted_cubic();
        let raise = Coeff::r_pow(-2) * Coeff::from_int(2);
        let thetas: Vec<LiftedForm> = (0..n).map(|k| self.pull(&self.base.theta(k))).collect();
        FormMatrix::from_fn(n + 1, n + 1, self.dim, |j, h| {
            if j == n || h == n {
                return LiftedForm::zero(self.dim, 1);
            }
            (0..n).fold(LiftedForm::zero(self.dim, 1), |acc, k| {
                let c = raise.clone() * sigma[(j * n + k) * n + h].clone();
                &acc + &thetas[k].scale(&c)
            })
        })
    }

    /// `W = [[ω̃, conj Ẽ],[Ẽ, conj ω̃]]` on the real tangent bundle complexified.
    pub fn flat_connection(&self) -> LiftedMatrix {
        let e = self.lifted_deviance();
        FormMatrix::from_blocks(&self.connection, &e.conj(), &e, &self.connection.conj())
    }

    pub fn flat_connection_check(&self) -> FlatReport {
        let n = self.n();
        let w = self.flat_connection();
        let omega_nabla = &self.d_matrix(&w) + &w.wedge(&w);

        let phase = Coeff::phase(2);
        let dev = self.base.deviance_derivative().expect("base frames agree");
        let expected_ll = pad(&self.pull_matrix(&dev), n + 1, self.dim, 2, |m, a, b| m.get(a, b).scale(&phase));
        let e = self.lifted_deviance();
        let lower_left = &(&self.d_matrix(&e) + &self.connection.conj().wedge(&e)) + &e.wedge(&self.connection);
        let bracket = pad(&self.pull_matrix(&self.base.bracket()), n + 1, self.dim, 2, |m, a, b| m.get(a, b).clone());

        let homogeneous = self.lifted_cubic().iter().all(|c| c.degrees().iter().all(|&deg| deg == (2, 2)));
        FlatReport {
            curvature: RingResidual::of_matrix(&omega_nabla),
            deviance_identity: RingResidual::of_matrix(&(&lower_left - &expected_ll)),
            bracket_identity: RingResidual::of_matrix(&(&e.conj().wedge(&e) - &bracket)),
            homogeneous,
        }
    }

    /// `g̃ = Σ_{k≤n} Re(θ̃̄^k θ̃^k) − Re(θ̃̄^{n+1} θ̃^{n+1})`.
    fn metric(&self) -> SymTensor {
        let n = self.n();
        (0..=n).fold(SymTensor::zero(self.dim), |acc, k| {
            let t = self.theta.get(k, 0);
            let p = SymTensor::product(&t.conj(), t);
            acc.add(&if k < n { p } else { p.scale(&Coeff::from_int(-1)) })
        })
    }

    /// `(i/2)(Σ_{k≤n} θ̃^k∧θ̃̄^k − θ̃^{n+1}∧θ̃̄^{n+1})`.
    pub fn kahler_form(&self) -> LiftedForm {
        let n = self.n();
        let half_i = Coeff::imag_unit() * Coeff::from_ratio(1, 2);
        (0..=n).fold(LiftedForm::zero(self.dim, 2), |acc, k| {
            let t = self.theta.get(k, 0);
            let w = t.wedge(&t.conj()).scale(&half_i);
            if k < n {
                &acc + &w
            } else {
                &acc - &w
            }
        })
    }

    /// `ξ = r∂_r` in generator components.
    pub fn euler_field(&self) -> Vec<Coeff> {
        let mut v = vec![Coeff::zero(); self.dim];
        v[self.dim - 2] = Coeff::r();
        v
    }

    /// `Ĩξ = ∂_ϑ` in generator components.
    pub fn rotation_field(&self) -> Vec<Coeff> {
        let mut v = vec![Coeff::zero(); self.dim];
        v[self.dim - 1] = Coeff::one();
        v
    }

    fn lie_derivative_1form(&self, v: &[Coeff], a: &LiftedForm) -> LiftedForm {
        &self.d(a).interior(v) + &self.d(&a.interior(v))
    }

    /// Components of a vector field in the lifted unitary coframe, as 0-forms.
    fn frame_components(&self, v: &[Coeff]) -> LiftedMatrix {
        FormMatrix::from_fn(self.n() + 1, 1, self.dim, |k, _| LiftedForm::constant(self.dim, self.theta.get(k, 0).eval1(v)))
    }

    /// `∇V − A` for a connection matrix acting on frame components.
    fn covariant_residual(&self, conn: &LiftedMatrix, comps: &LiftedMatrix, expected: &LiftedMatrix) -> RingResidual {
        RingResidual::of_matrix(&(&(&self.d_matrix(comps) + &conn.wedge(comps)) - expected))
    }

    fn doubled(&self, m: &LiftedMatrix) -> LiftedMatrix {
        let rows = m.rows();
        FormMatrix::from_fn(2 * rows, 1, self.dim, |i, _| if i < rows { m.get(i, 0).clone() } else { m.get(i - rows, 0).conj() })
    }

    pub fn definition_invariants(&self) -> InvariantReport {
        let n = self.n();
        let xi = self.euler_field();
        let i_xi = self.rotation_field();
        let r = Coeff::r();
        let r2 = Coeff::r_pow(2);
        let i = Coeff::imag_unit();

        let xi_c = self.frame_components(&xi);
        let i_xi_c = self.frame_components(&i_xi);
        let w = self.flat_connection();
        let lc_xi = self.covariant_residual(&self.connection, &xi_c, &self.theta);
        let flat_xi = self.covariant_residual(&w, &self.doubled(&xi_c), &self.doubled(&self.theta));
        let flat_i_xi = self.covariant_residual(&w, &self.doubled(&i_xi_c), &self.doubled(&self.theta.scale(&i)));

        let g = self.metric();
        let lie = (0..=n).fold(SymTensor::zero(self.dim), |acc, k| {
            let t = self.theta.get(k, 0);
            let lt = self.lie_derivative_1form(&xi, t);
            let p = SymTensor::product(&lt.conj(), t).add(&SymTensor::product(&t.conj(), &lt));
            acc.add(&if k < n { p } else { p.scale(&Coeff::from_int(-1)) })
        });
        let homothety = lie.add(&g.scale(&Coeff::from_int(-2)));

        let base_metric = (0..2 * n).fold(SymTensor::zero(self.dim), |acc, k| {
            let u = LiftedForm::basis(self.dim, k);
            acc.add(&SymTensor::product(&u, &u))
        });
        let model = base_metric
            .scale(&r2)
            .add(&SymTensor::product(&self.phi, &self.phi).scale(&-r2.clone()))
            .add(&SymTensor::product(&self.dr(), &self.dr()).scale(&Coeff::from_int(-1)));
        let metric_identity = g.add(&model.scale(&Coeff::from_int(-1)));

        let kf = self.kahler_form();
        let kahler_model = &self.pull(&self.base.omega).scale(&r2) + &self.phi.wedge(&self.dr()).scale(&r);
        let mu = LiftedForm::constant(self.dim, r2.clone() * Coeff::from_ratio(1, 2));
        let moment_map = &self.d(&mu) - &kf.interior(&i_xi);
        let euler_contraction = &kf.interior(&xi) + &self.phi.scale(&r2);
        let fibre_curvature = &self.d(&self.phi) + &self.pull(&self.base.omega).scale(&Coeff::from_int(2));

        let mut j_conn_dagger_j = self.connection.adjoint();
        for a in 0..=n {
            for b in 0..=n {
                if (a == n) != (b == n) {
                    let flipped = -j_conn_dagger_j.get(a, b);
                    j_conn_dagger_j.set(a, b, flipped);
                }
            }
        }
        let anti_hermitian = &self.connection + &j_conn_dagger_j;

        let eig = SymmetricEigen::new(g.gram_at_unit());
        let pos = eig.eigenvalues.iter().filter(|&&e| e > 1e-12).count();
        let neg = eig.eigenvalues.iter().filter(|&&e| e < -1e-12).count();

        InvariantReport {
            lc_xi,
            flat_xi,
            flat_i_xi,
            homothety: RingResidual::of_tensor(&homothety),
            metric_identity: RingResidual::of_tensor(&metric_identity),
            kahler_identity: RingResidual::of_form(&(&kf - &kahler_model)),
            kahler_closed: RingResidual::of_form(&self.d(&kf)),
            moment_map: RingResidual::of_form(&moment_map),
            euler_contraction: RingResidual::of_form(&euler_contraction),
            fibre_curvature: RingResidual::of_form(&fibre_curvature),
            anti_hermitian: RingResidual::of_matrix(&anti_hermitian),
            signature: (pos, neg),
            expected_signature: (2 * n, 2),
        }
    }
}

fn pull(f: &BaseForm, dim: usize) -> LiftedForm {
    f.map(|c| Coeff::constant(c.clone())).extend_frame(dim)
}

/// `(size × size)` matrix with the upper-left block taken from `m` (through
/// `entry`) and zero `degree`-forms elsewhere.
fn pad(
    m: &LiftedMatrix,
    size: usize,
    dim: usize,
    degree: usize,
    entry: impl Fn(&LiftedMatrix, usize, usize) -> LiftedForm,
) -> LiftedMatrix {
    FormMatrix::from_fn(size, size, dim, |a, b| {
        if a < m.rows() && b < m.cols() {
            entry(m, a, b)
        } else {
            LiftedForm::zero(dim, degree)
        }
    })
}
