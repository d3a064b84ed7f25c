use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Rational, UniPoly};
use crate::{Error, Result};

/// Formal power series over the rationals, known up to and including
/// `s^order`. All arithmetic truncates to the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Series with the given leading coefficients, padded with zeros or cut
    /// to `order + 1` terms.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    pub fn from_poly(p: &UniPoly<Rational>, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Series("operands truncated at different orders"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("inverse needs a nonzero constant term"));
        }
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(c0.recip());
        for k in 1..=n {
            let acc: Rational = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out.push(-acc / c0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Term-by-term derivative. Only `order - 1` coefficients survive, so
    /// the result is one order shorter.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::Series("derivative of an order-0 series"));
        }
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        })
    }

    /// `exp(f)` for `f(0) = 0`, via `g' = f' g`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp needs a zero constant term"));
        }
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(Rational::one());
        for m in 1..=n {
            let acc: Rational = (1..=m)
                .map(|k| &self.coeffs[k] * &out[m - k] * Rational::from_integer(BigInt::from(k)))
                .sum();
            out.push(acc / Rational::from_integer(BigInt::from(m)));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `log(f)` for `f(0) = 1`, via `f g' = f'`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log needs constant term 1"));
        }
        let n = self.order();
        let mut out: Vec<Rational> = vec![Rational::zero(); n + 1];
        for m in 1..=n {
            // m g_m = m f_m - sum_{k=1}^{m-1} k g_k f_{m-k}
            let mut acc = &self.coeffs[m] * Rational::from_integer(BigInt::from(m));
            for k in 1..m {
                acc -= &out[k] * &self.coeffs[m - k] * Rational::from_integer(BigInt::from(k));
            }
            out[m] = acc / Rational::from_integer(BigInt::from(m));
        }
        Ok(TruncatedSeries { coeffs: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use proptest::prelude::*;

    fn series(cs: &[(i64, i64)], order: usize) -> TruncatedSeries {
        TruncatedSeries::new(cs.iter().map(|&(n, d)| rational(n, d)).collect(), order)
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(TruncatedSeries::zero(5).exp().unwrap(), TruncatedSeries::one(5));
    }

    #[test]
    fn log_of_geometric_series() {
        let geometric = series(&[(1, 1); 5], 4);
        let expect = series(&[(0, 1), (1, 1), (1, 2), (1, 3), (1, 4)], 4);
        assert_eq!(geometric.log().unwrap(), expect);
    }

    #[test]
    fn inverse_of_uniform_k3_determinant() {
        let det = series(&[(1, 1), (0, 1), (-3, 4), (-1, 4)], 3);
        let expect = series(&[(1, 1), (0, 1), (3, 4), (1, 4)], 3);
        assert_eq!(det.inverse().unwrap(), expect);
    }

    #[test]
    fn preconditions() {
        let f = series(&[(1, 1), (1, 1)], 3);
        assert!(f.exp().is_err());
        assert!(series(&[(2, 1)], 3).log().is_err());
        assert!(series(&[(0, 1), (1, 1)], 3).inverse().is_err());
        assert!(f.add(&TruncatedSeries::zero(2)).is_err());
        assert!(TruncatedSeries::one(0).derivative().is_err());
    }

    #[test]
    fn derivative_drops_one_order() {
        let f = series(&[(1, 1), (2, 1), (3, 1)], 2);
        assert_eq!(f.derivative().unwrap(), series(&[(2, 1), (6, 1)], 1));
    }

    fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-9i64..=9, 1i64..=9), 8)
            .prop_map(|cs| {
                let mut v: Vec<Rational> = cs.into_iter().map(|(n, d)| rational(n, d)).collect();
                v[0] = Rational::one();
                TruncatedSeries::new(v, 7)
            })
    }

    proptest! {
        #[test]
        fn exp_inverts_log(f in unit_series()) {
            prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
        }

        #[test]
        fn inverse_is_multiplicative_inverse(f in unit_series()) {
            prop_assert_eq!(f.mul(&f.inverse().unwrap()).unwrap(), TruncatedSeries::one(7));
        }

        #[test]
        fn log_turns_products_into_sums(f in unit_series(), g in unit_series()) {
            let lhs = f.mul(&g).unwrap().log().unwrap();
            let rhs = f.log().unwrap().add(&g.log().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
