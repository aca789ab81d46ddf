use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{PskError, Result};

/// Alternating multilinear form on a fixed frame of dimension `dim`, stored by
/// strictly increasing index sets encoded as bit masks.
#[derive(Clone, PartialEq)]
pub struct AlternatingForm<C> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<u64, C>,
}

fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1 << i))
}

fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of concatenating the increasing index lists of `a` then `b`.
fn merge_sign(a: u64, b: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 63 { 0 } else { a & !((1u64 << (j + 1)) - 1) };
        inversions += above.count_ones();
    }
    inversions % 2 == 1
}

impl<C: Scalar> AlternatingForm<C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= 63, "frame dimension too large");
        AlternatingForm { dim, degree, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        let mut f = Self::zero(dim, 0);
        f.insert(0, c);
        f
    }

    /// The coframe element `u^i` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::monomial(dim, &[i], C::one())
    }

    /// `c · u^{i_1} ∧ … ∧ u^{i_k}` for an arbitrary index order.
    pub fn monomial(dim: usize, indices: &[usize], c: C) -> Self {
        let mut f = Self::zero(dim, indices.len());
        let mut sorted = indices.to_vec();
        let mut odd = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return f;
        }
        assert!(sorted.iter().all(|&i| i < dim), "index out of frame");
        f.insert(mask_of(&sorted), if odd { -c } else { c });
        f
    }

    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, C)>) -> Self {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree mismatch");
            f = &f + &Self::monomial(dim, &idx, c);
        }
        f
    }

    fn insert(&mut self, mask: u64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(mask, s);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero components as (increasing indices, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &C)> {
        self.terms.iter().map(|(m, c)| (indices_of(*m), c))
    }

    /// Component on an increasing index tuple (zero when absent).
    pub fn coefficient(&self, indices: &[usize]) -> C {
        self.terms.get(&mask_of(indices)).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, v) in &self.terms {
            out.insert(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> AlternatingForm<D> {
        let mut out = AlternatingForm::zero(self.dim, self.degree);
        for (m, v) in &self.terms {
            out.insert(*m, f(v));
        }
        out
    }

    pub fn try_map<D: Scalar, E>(&self, f: impl Fn(&C) -> std::result::Result<D, E>) -> std::result::Result<AlternatingForm<D>, E> {
        let mut out = AlternatingForm::zero(self.dim, self.degree);
        for (m, v) in &self.terms {
            out.insert(*m, f(v)?);
        }
        Ok(out)
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// Embed into a larger frame whose first `self.dim` elements are this frame.
    pub fn extend_frame(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        AlternatingForm { dim, degree: self.degree, terms: self.terms.clone() }
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(PskError::FrameMismatch { left: self.dim, right: other.dim });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if self.degree + other.degree > self.dim {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let p = ca.clone() * cb.clone();
                out.insert(ma | mb, if merge_sign(*ma, *mb) { -p } else { p });
            }
        }
        Ok(out)
    }

    /// Exterior product; panics on a frame mismatch (see [`Self::try_wedge`]).
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge of forms on different frames")
    }

    /// Contraction `ι_v` with a vector given by its frame components.
    pub fn interior(&self, v: &[C]) -> Self {
        assert_eq!(v.len(), self.dim, "vector length must match frame");
        if self.degree == 0 {
            return Self::zero(self.dim, 0);
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (m, c) in &self.terms {
            for (s, i) in indices_of(*m).into_iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let p = c.clone() * v[i].clone();
                out.insert(m & !(1 << i), if s % 2 == 1 { -p } else { p });
            }
        }
        out
    }

    /// Value of a 2-form on a pair of vectors.
    pub fn eval2(&self, x: &[C], y: &[C]) -> C {
        assert_eq!(self.degree, 2, "eval2 needs a 2-form");
        self.interior(x).interior(y).coefficient(&[])
    }

    /// Value of a 1-form on a vector.
    pub fn eval1(&self, x: &[C]) -> C {
        assert_eq!(self.degree, 1, "eval1 needs a 1-form");
        self.interior(x).coefficient(&[])
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Exterior derivative given the differentials of the frame covectors and
    /// a differential for coefficients (`d f` as a 1-form).
    pub fn exterior_d(&self, generator_d: &[Self], coeff_d: impl Fn(&C) -> Self) -> Self {
        assert_eq!(generator_d.len(), self.dim);
        let mut cache: HashMap<u64, Self> = HashMap::new();
        let mut out = Self::zero(self.dim, self.degree + 1);
        for (m, c) in &self.terms {
            let basis = Self::from_mask(self.dim, *m);
            let df = coeff_d(c);
            if !df.is_zero() {
                out = &out + &df.wedge(&basis);
            }
            let db = basis_d(self.dim, *m, generator_d, &mut cache);
            if !db.is_zero() {
                out = &out + &db.scale(c);
            }
        }
        out
    }

    fn from_mask(dim: usize, mask: u64) -> Self {
        let mut f = Self::zero(dim, mask.count_ones() as usize);
        f.insert(mask, C::one());
        f
    }
}

/// `d(u^{i_1} ∧ … ∧ u^{i_k})` by the graded Leibniz rule.
fn basis_d<C: Scalar>(
    dim: usize,
    mask: u64,
    generator_d: &[AlternatingForm<C>],
    cache: &mut HashMap<u64, AlternatingForm<C>>,
) -> AlternatingForm<C> {
    if let Some(f) = cache.get(&mask) {
        return f.clone();
    }
    let degree = mask.count_ones() as usize;
    let out = if mask == 0 {
        AlternatingForm::zero(dim, 1)
    } else {
        let first = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let head = AlternatingForm::<C>::basis(dim, first);
        let rest_form = AlternatingForm::<C>::from_mask(dim, rest);
        let d_rest = basis_d(dim, rest, generator_d, cache);
        let left = generator_d[first].wedge(&rest_form);
        let right = head.wedge(&d_rest);
        &left - &right
    };
    debug_assert_eq!(out.degree, degree + 1);
    cache.insert(mask, out.clone());
    out
}

impl<C: Scalar> Add for &AlternatingForm<C> {
    type Output = AlternatingForm<C>;
    fn add(self, rhs: Self) -> AlternatingForm<C> {
        assert_eq!(self.dim, rhs.dim, "adding forms on different frames");
        if rhs.terms.is_empty() {
            return self.clone();
        }
        if self.terms.is_empty() {
            return rhs.clone();
        }
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(*m, c.clone());
        }
        out
    }
}

impl<C: Scalar> Neg for &AlternatingForm<C> {
    type Output = AlternatingForm<C>;
    fn neg(self) -> AlternatingForm<C> {
        self.map(|c| -c.clone())
    }
}

impl<C: Scalar> Sub for &AlternatingForm<C> {
    type Output = AlternatingForm<C>;
    fn sub(self, rhs: Self) -> AlternatingForm<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Add for AlternatingForm<C> {
    type Output = AlternatingForm<C>;
    fn add(self, rhs: Self) -> AlternatingForm<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for AlternatingForm<C> {
    type Output = AlternatingForm<C>;
    fn sub(self, rhs: Self) -> AlternatingForm<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Neg for AlternatingForm<C> {
    type Output = AlternatingForm<C>;
    fn neg(self) -> AlternatingForm<C> {
        -&self
    }
}

impl<C: Scalar> fmt::Debug for AlternatingForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(idx, c)| {
                let name: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                format!("({:?})u^{{{}}}", c, name.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
