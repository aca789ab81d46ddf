//! Exact complex numbers with multi-quadratic surd parts `Σ q_s √s`
//! (`s` squarefree, `q_s` rational).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{PskError, Result};
use crate::tensor_core::Scalar;

/// Real element of `ℚ(√2, √3, √5, …)` in the squarefree basis.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn squarefree(mut s: u64) -> (u64, u64) {
    // s = outer² · inner with inner squarefree.
    let (mut outer, mut inner) = (1u64, 1u64);
    let mut p = 2u64;
    while p * p <= s {
        while s.is_multiple_of(p * p) {
            s /= p * p;
            outer *= p;
        }
        if s.is_multiple_of(p) {
            s /= p;
            inner *= p;
        }
        p += 1;
    }
    (outer, inner * s)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(q: BigRational) -> Self {
        let mut s = Surd::zero();
        s.add_term(1, q);
        s
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(ratio(n, d))
    }

    /// `q √s` for any positive integer `s`.
    pub fn sqrt_times(q: BigRational, s: u64) -> Self {
        assert!(s > 0);
        let (outer, inner) = squarefree(s);
        let mut out = Surd::zero();
        out.add_term(inner, q * BigRational::from_integer(BigInt::from(outer)));
        out
    }

    fn add_term(&mut self, s: u64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&s) {
            Some(old) => old + q,
            None => q,
        };
        if !sum.is_zero() {
            self.terms.insert(s, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(s, q)| q.to_f64().unwrap_or(f64::NAN) * (*s as f64).sqrt()).sum()
    }

    /// Snaps a float to `q √s` (`s ≤ 30` squarefree, denominator ≤ 1000).
    pub fn snap(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(PskError::NotExact(x));
        }
        if x.abs() < 1e-13 {
            return Ok(Surd::zero());
        }
        let tol = 1e-12 * x.abs().max(1.0);
        for s in (1u64..=30).filter(|&s| squarefree(s).0 == 1) {
            let root = (s as f64).sqrt();
            let q = x / root;
            for den in 1i64..=1000 {
                let num = (q * den as f64).round();
                if num.abs() > 1e15 {
                    break;
                }
                if (num / den as f64 * root - x).abs() < tol {
                    return Ok(Surd::sqrt_times(ratio(num as i64, den), s));
                }
            }
        }
        Err(PskError::NotExact(x))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        for (s, q) in rhs.terms {
            self.add_term(s, q);
        }
        self
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.into_iter().map(|(s, q)| (s, -q)).collect() }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let mut out = Surd::zero();
        for (s, p) in &self.terms {
            for (t, q) in &rhs.terms {
                let g = s.gcd(t);
                let inner = (s / g) * (t / g);
                out.add_term(inner, p * q * BigRational::from_integer(BigInt::from(g)));
            }
        }
        out
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, q)| if *s == 1 { format!("{q}") } else { format!("{q}·√{s}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact complex number `re + i·im` with surd parts.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Exact {
    pub re: Surd,
    pub im: Surd,
}

impl Exact {
    pub fn real(re: Surd) -> Self {
        Exact { re, im: Surd::zero() }
    }

    pub fn snap(z: Complex64) -> Result<Self> {
        Ok(Exact { re: Surd::snap(z.re)?, im: Surd::snap(z.im)? })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        Exact { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        Exact { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { re: -self.re, im: -self.im }
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Exact { re, im }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{:?}", self.re),
            (true, false) => write!(f, "i({:?})", self.im),
            (false, false) => write!(f, "{:?} + i({:?})", self.re, self.im),
        }
    }
}

impl Scalar for Exact {
    fn zero() -> Self {
        Exact::default()
    }
    fn one() -> Self {
        Exact::real(Surd::from_ratio(1, 1))
    }
    fn imag_unit() -> Self {
        Exact { re: Surd::zero(), im: Surd::from_ratio(1, 1) }
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Exact::real(Surd::from_ratio(num, den))
    }
    fn conj(&self) -> Self {
        Exact { re: self.re.clone(), im: -self.im.clone() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        let z = self.to_complex();
        z.re.abs().max(z.im.abs())
    }
}
