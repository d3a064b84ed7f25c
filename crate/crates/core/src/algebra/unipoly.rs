use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Ring;
use crate::{Error, Result};

/// Univariate polynomial in the auxiliary variable `s` with coefficients in
/// a ring `R`, lowest degree first. Trailing zero coefficients are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / den`. The divisor must have a nonzero
    /// constant term; quotient coefficients are produced from the bottom up
    /// and the result is confirmed by multiplying back.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        let d0 = den.coeffs.first().ok_or(Error::DivisionByZero)?;
        if d0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (Some(num_deg), Some(den_deg)) = (self.degree(), den.degree()) else {
            return Ok(Self::zero());
        };
        if num_deg < den_deg {
            return Err(Error::InexactDivision);
        }
        let mut quot: Vec<R> = Vec::with_capacity(num_deg - den_deg + 1);
        for k in 0..=num_deg - den_deg {
            let mut acc = self.coeff(k);
            for i in 1..=k.min(den_deg) {
                acc = acc.sub(&den.coeffs[i].mul(&quot[k - i]));
            }
            quot.push(acc.div_exact(d0)?);
        }
        let quot = Self::new(quot);
        if quot.mul(den) != *self {
            return Err(Error::InexactDivision);
        }
        Ok(quot)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&R::from_int(k as i64)))
                .collect(),
        )
    }

    /// Horner evaluation at `s = x`.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<R: Ring> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*s")?,
                _ => write!(f, "({c})*s^{k}")?,
            }
        }
        Ok(())
    }
}
