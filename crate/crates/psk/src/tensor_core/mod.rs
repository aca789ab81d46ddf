//! Exterior calculus over a fixed finite frame.
//!
//! Conventions: `(α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X)`, and left-invariant
//! covectors satisfy `du^k(e_i,e_j) = −u^k([e_i,e_j])`, i.e.
//! `du^k = −Σ_{i<j} c^k_{ij} u^i∧u^j`.

mod form;
mod matrix;
mod scalar;

pub use form::AlternatingForm;
pub use matrix::FormMatrix;
pub use scalar::{realify, Scalar};

use crate::error::{PskError, Result};

/// Structure constants `c^k_{ij}` of a frame, `[e_i,e_j] = Σ_k c^k_{ij} e_k`,
/// over an arbitrary coefficient type.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<C> {
    dim: usize,
    c: Vec<C>,
}

impl<C: Scalar> StructureConstants<C> {
    pub fn zero(dim: usize) -> Self {
        StructureConstants { dim, c: vec![C::zero(); dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}` (0-based).
    pub fn get(&self, k: usize, i: usize, j: usize) -> &C {
        &self.c[(k * self.dim + i) * self.dim + j]
    }

    /// Sets `c^k_{ij}` and its antisymmetric partner `c^k_{ji}`.
    pub fn set(&mut self, k: usize, i: usize, j: usize, value: C) {
        let d = self.dim;
        self.c[(k * d + j) * d + i] = -value.clone();
        self.c[(k * d + i) * d + j] = value;
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> StructureConstants<D> {
        StructureConstants { dim: self.dim, c: self.c.iter().map(f).collect() }
    }

    pub fn try_map<D: Scalar, E>(&self, f: impl Fn(&C) -> std::result::Result<D, E>) -> std::result::Result<StructureConstants<D>, E> {
        Ok(StructureConstants { dim: self.dim, c: self.c.iter().map(f).collect::<std::result::Result<_, _>>()? })
    }

    /// `du^k` for every frame covector.
    pub fn covector_differentials(&self) -> Vec<AlternatingForm<C>> {
        let d = self.dim;
        (0..d)
            .map(|k| {
                let mut f = AlternatingForm::zero(d, 2);
                for i in 0..d {
                    for j in i + 1..d {
                        let c = self.get(k, i, j);
                        if !c.is_zero() {
                            f = &f + &AlternatingForm::monomial(d, &[i, j], -c.clone());
                        }
                    }
                }
                f
            })
            .collect()
    }
}

/// Chevalley–Eilenberg differential of a left-invariant (constant coefficient) form.
pub fn ce_differential<C: Scalar>(form: &AlternatingForm<C>, consts: &StructureConstants<C>) -> Result<AlternatingForm<C>> {
    if form.dim() != consts.dim() {
        return Err(PskError::FrameMismatch { left: form.dim(), right: consts.dim() });
    }
    let gens = consts.covector_differentials();
    let dim = form.dim();
    Ok(form.exterior_d(&gens, |_| AlternatingForm::zero(dim, 1)))
}

/// Entrywise Chevalley–Eilenberg differential of a constant-coefficient form matrix.
pub fn ce_differential_matrix<C: Scalar>(m: &FormMatrix<C>, consts: &StructureConstants<C>) -> Result<FormMatrix<C>> {
    if m.dim() != consts.dim() {
        return Err(PskError::FrameMismatch { left: m.dim(), right: consts.dim() });
    }
    let gens = consts.covector_differentials();
    let dim = m.dim();
    Ok(m.map(|e| e.exterior_d(&gens, |_| AlternatingForm::zero(dim, 1))))
}
