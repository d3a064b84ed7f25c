use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{modular, RingMatrix};
use crate::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Matrices at or below this dimension use the generic elimination
/// routines even over the rationals.
const SMALL_DIM: usize = 6;

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parse `p/q` or an integer. Whitespace is not allowed inside the token.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() || text.contains(char::is_whitespace) {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// A commutative ring with exact division where the quotient exists.
///
/// Both scalar kinds used by the crate (rationals and multivariate
/// polynomials over the rationals) are integral domains, which is what the
/// fraction-free determinant needs.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Quotient `self / den`, failing when `den` does not divide `self`.
    fn div_exact(&self, den: &Self) -> Result<Self>;
    fn from_rational(q: Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Rough cost of using this element as an elimination pivot.
    fn size_hint(&self) -> usize {
        1
    }

    fn pow(&self, mut exp: u32) -> Self {
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

    fn sum<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }

    fn product<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }

    /// Determinant of a square matrix over this ring.
    fn det(m: &RingMatrix<Self>) -> Self {
        m.det_bareiss()
    }

    /// Coefficients (lowest degree first) of `det(I - s*m)` as a polynomial in `s`.
    fn char_coeffs(m: &RingMatrix<Self>) -> Vec<Self> {
        m.char_coeffs_berkowitz()
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, den: &Self) -> Result<Self> {
        if Zero::is_zero(den) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / den)
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn size_hint(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }

    fn det(m: &RingMatrix<Self>) -> Self {
        if m.dim() <= SMALL_DIM {
            m.det_bareiss()
        } else {
            modular::det_rational(m)
        }
    }

    fn char_coeffs(m: &RingMatrix<Self>) -> Vec<Self> {
        if m.dim() <= SMALL_DIM {
            m.char_coeffs_berkowitz()
        } else {
            modular::char_coeffs_rational(m)
        }
    }
}
