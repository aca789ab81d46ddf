//! Laurent–Fourier polynomials `Σ c_{k,m} r^k e^{imϑ}` on the conic factor.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::tensor_core::Scalar;

/// Canonical sum of monomials `c · r^k e^{imϑ}`, keyed by `(k, m)`.
#[derive(Clone, PartialEq)]
pub struct RingElem<C> {
    terms: BTreeMap<(i32, i32), C>,
}

impl<C: Scalar> RingElem<C> {
    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(k: i32, m: i32, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((k, m), c);
        }
        RingElem { terms }
    }

    /// `r`.
    pub fn r() -> Self {
        Self::monomial(1, 0, C::one())
    }

    /// `r^k`.
    pub fn r_pow(k: i32) -> Self {
        Self::monomial(k, 0, C::one())
    }

    /// `e^{imϑ}`.
    pub fn phase(m: i32) -> Self {
        Self::monomial(0, m, C::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i32, m: i32) -> C {
        self.terms.get(&(k, m)).cloned().unwrap_or_else(C::zero)
    }

    /// Multidegrees `(k, m)` carrying a nonzero coefficient.
    pub fn degrees(&self) -> Vec<(i32, i32)> {
        self.terms.keys().copied().collect()
    }

    fn insert(&mut self, key: (i32, i32), c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    /// `∂/∂r`.
    pub fn d_r(&self) -> Self {
        let mut out = Self::zero();
        for (&(k, m), c) in &self.terms {
            if k != 0 {
                out.insert((k - 1, m), c.clone() * C::from_int(k as i64));
            }
        }
        out
    }

    /// `∂/∂ϑ`.
    pub fn d_theta(&self) -> Self {
        let mut out = Self::zero();
        for (&(k, m), c) in &self.terms {
            if m != 0 {
                out.insert((k, m), c.clone() * C::from_int(m as i64) * C::imag_unit());
            }
        }
        out
    }

    /// `r ∂/∂r`, the Euler derivation.
    pub fn euler(&self) -> Self {
        let mut out = Self::zero();
        for (&(k, m), c) in &self.terms {
            out.insert((k, m), c.clone() * C::from_int(k as i64));
        }
        out
    }

    /// Value at `r = 1`, `ϑ = 0`.
    pub fn at_unit(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }
}

impl<C: Scalar> Add for RingElem<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.insert(k, c);
        }
        self
    }
}

impl<C: Scalar> Neg for RingElem<C> {
    type Output = Self;
    fn neg(self) -> Self {
        RingElem { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<C: Scalar> Sub for RingElem<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Scalar> Mul for RingElem<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (&(k1, m1), a) in &self.terms {
            for (&(k2, m2), b) in &rhs.terms {
                out.insert((k1 + k2, m1 + m2), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Scalar for RingElem<C> {
    fn zero() -> Self {
        RingElem { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn imag_unit() -> Self {
        Self::constant(C::imag_unit())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(C::from_ratio(num, den))
    }
    /// Complex conjugation: conjugates coefficients and sends `e^{imϑ}` to `e^{−imϑ}`.
    fn conj(&self) -> Self {
        RingElem { terms: self.terms.iter().map(|(&(k, m), c)| ((k, -m), c.conj())).collect() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl<C: Scalar> fmt::Debug for RingElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(k, m), c)| match (k, m) {
                (0, 0) => format!("({c:?})"),
                (k, 0) => format!("({c:?})r^{k}"),
                (0, m) => format!("({c:?})e^{{{m}iϑ}}"),
                (k, m) => format!("({c:?})r^{k}e^{{{m}iϑ}}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
