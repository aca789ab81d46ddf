use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::form::AlternatingForm;
use super::scalar::Scalar;
use crate::error::{PskError, Result};

/// Dense matrix of alternating forms sharing one frame.
#[derive(Clone, PartialEq)]
pub struct FormMatrix<C> {
    rows: usize,
    cols: usize,
    dim: usize,
    entries: Vec<AlternatingForm<C>>,
}

impl<C: Scalar> FormMatrix<C> {
    pub fn zeros(rows: usize, cols: usize, dim: usize, degree: usize) -> Self {
        FormMatrix { rows, cols, dim, entries: vec![AlternatingForm::zero(dim, degree); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, dim: usize, f: impl Fn(usize, usize) -> AlternatingForm<C>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.dim(), dim, "entry frame mismatch");
                entries.push(e);
            }
        }
        FormMatrix { rows, cols, dim, entries }
    }

    /// Scalar multiple of the identity by a form.
    pub fn diagonal(size: usize, form: &AlternatingForm<C>) -> Self {
        let zero = AlternatingForm::zero(form.dim(), form.degree());
        Self::from_fn(size, size, form.dim(), |i, j| if i == j { form.clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &AlternatingForm<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: AlternatingForm<C>) {
        assert_eq!(f.dim(), self.dim, "entry frame mismatch");
        self.entries[i * self.cols + j] = f;
    }

    pub fn map(&self, f: impl Fn(&AlternatingForm<C>) -> AlternatingForm<C>) -> Self {
        let dim = self.entries.first().map(|e| f(e).dim()).unwrap_or(self.dim);
        FormMatrix { rows: self.rows, cols: self.cols, dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn map_scalar<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> FormMatrix<D> {
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.map(f)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|e| e.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Entry `(i,k) = Σ_j A_ij ∧ B_jk`.
    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(PskError::ShapeMismatch(format!(
                "{}x{} ∧ {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.dim != other.dim {
            return Err(PskError::FrameMismatch { left: self.dim, right: other.dim });
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for k in 0..other.cols {
                let mut acc: Option<AlternatingForm<C>> = None;
                for j in 0..self.cols {
                    let (a, b) = (self.get(i, j), other.get(j, k));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let p = a.wedge(b);
                    acc = Some(match acc {
                        Some(s) => &s + &p,
                        None => p,
                    });
                }
                let degree = self.get(i, 0).degree() + other.get(0, k).degree();
                out.push(acc.unwrap_or_else(|| AlternatingForm::zero(self.dim, degree)));
            }
        }
        Ok(FormMatrix { rows: self.rows, cols: other.cols, dim: self.dim, entries: out })
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("matrix wedge shape mismatch")
    }

    /// Copy of the block `rows × cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, self.dim, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assemble a 2×2 block matrix.
    pub fn from_blocks(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Self {
        assert_eq!(tl.rows, tr.rows);
        assert_eq!(bl.rows, br.rows);
        assert_eq!(tl.cols, bl.cols);
        assert_eq!(tr.cols, br.cols);
        let (r, c) = (tl.rows, tl.cols);
        Self::from_fn(tl.rows + bl.rows, tl.cols + tr.cols, tl.dim, |i, j| match (i < r, j < c) {
            (true, true) => tl.get(i, j).clone(),
            (true, false) => tr.get(i, j - c).clone(),
            (false, true) => bl.get(i - r, j).clone(),
            (false, false) => br.get(i - r, j - c).clone(),
        })
    }
}

impl<C: Scalar> Add for &FormMatrix<C> {
    type Output = FormMatrix<C>;
    fn add(self, rhs: Self) -> FormMatrix<C> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shape mismatch");
        FormMatrix {
            rows: self.rows,
            cols: self.cols,
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<C: Scalar> Sub for &FormMatrix<C> {
    type Output = FormMatrix<C>;
    fn sub(self, rhs: Self) -> FormMatrix<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Neg for &FormMatrix<C> {
    type Output = FormMatrix<C>;
    fn neg(self) -> FormMatrix<C> {
        self.map(|e| -e)
    }
}

impl<C: Scalar> fmt::Debug for FormMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  {}", row.join(" | "))?;
        }
        write!(f, "]")
    }
}
