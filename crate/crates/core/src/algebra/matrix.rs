use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::Ring;
use crate::{Error, Result};

/// Dense square matrix over a ring, with one label per row/column.
///
/// Labels identify rows and columns across minors: removing rows keeps the
/// surviving labels in their original order.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix<R> {
    labels: Vec<usize>,
    entries: Vec<R>,
}

impl<R: Ring> RingMatrix<R> {
    /// Build from row-major entries. Labels must be unique.
    pub fn new(labels: Vec<usize>, entries: Vec<R>) -> Result<Self> {
        let n = labels.len();
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Dimension("duplicate row/column label".into()));
        }
        Ok(RingMatrix { labels, entries })
    }

    /// `n x n` matrix labelled `0..n` with entry `(i, j)` from `f(i, j)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        RingMatrix {
            labels: (0..n).collect(),
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        Self::new((0..n).collect(), rows.into_iter().flatten().collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| R::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn diagonal(values: &[R]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i].clone()
            } else {
                R::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        let n = self.dim();
        self.entries[i * n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[R] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> RingMatrix<S> {
        RingMatrix {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Ring>(&self, f: impl FnMut(&R) -> Result<S>) -> Result<RingMatrix<S>> {
        Ok(RingMatrix {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "{}x{} against {}x{}",
                self.dim(),
                self.dim(),
                other.dim(),
                other.dim()
            )));
        }
        Ok(RingMatrix {
            labels: self.labels.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, R::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, R::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::Dimension("matrix product of unequal sizes".into()));
        }
        let mut out = Self::zeros(n);
        out.labels = self.labels.clone();
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Multiply row `i` by `factors[i]`, i.e. `diag(factors) * self`.
    pub fn scale_rows(&self, factors: &[R]) -> Result<Self> {
        let n = self.dim();
        if factors.len() != n {
            return Err(Error::Dimension("row factor count".into()));
        }
        Ok(RingMatrix {
            labels: self.labels.clone(),
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(k, x)| x.mul(&factors[k / n]))
                .collect(),
        })
    }

    pub fn trace(&self) -> R {
        (0..self.dim()).fold(R::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Sum of each row.
    pub fn row_sums(&self) -> Vec<R> {
        (0..self.dim()).map(|i| R::sum(self.row(i))).collect()
    }

    /// Delete the rows and columns whose labels appear in `remove`.
    pub fn minor(&self, remove: &[usize]) -> Result<Self> {
        for label in remove {
            if !self.labels.contains(label) {
                return Err(Error::UnknownLabel(*label));
            }
        }
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&i| !remove.contains(&self.labels[i]))
            .collect();
        Ok(self.principal_submatrix(&keep))
    }

    /// Keep only the rows and columns whose labels appear in `keep`.
    pub fn restrict_to(&self, keep: &[usize]) -> Result<Self> {
        for label in keep {
            if !self.labels.contains(label) {
                return Err(Error::UnknownLabel(*label));
            }
        }
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&i| keep.contains(&self.labels[i]))
            .collect();
        Ok(self.principal_submatrix(&idx))
    }

    /// Principal submatrix on row/column positions `idx` (not labels).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                entries.push(self.get(i, j).clone());
            }
        }
        RingMatrix {
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            entries,
        }
    }

    /// Determinant using the ring's preferred algorithm.
    pub fn det(&self) -> R {
        R::det(self)
    }

    /// Fraction-free (Bareiss) elimination. Every division is exact over an
    /// integral domain, so this works unchanged for rationals and
    /// polynomials.
    pub fn det_bareiss(&self) -> R {
        let n = self.dim();
        if n == 0 {
            return R::one();
        }
        let mut a = self.entries.clone();
        let mut negate = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            let pivot = (k..n)
                .filter(|&i| !a[i * n + k].is_zero())
                .min_by_key(|&i| a[i * n + k].size_hint());
            let Some(p) = pivot else {
                return R::zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            let akk = a[k * n + k].clone();
            for i in k + 1..n {
                let aik = a[i * n + k].clone();
                for j in k + 1..n {
                    let mut v = akk.mul(&a[i * n + j]);
                    let akj = &a[k * n + j];
                    if !aik.is_zero() && !akj.is_zero() {
                        v = v.sub(&aik.mul(akj));
                    }
                    a[i * n + j] = v
                        .div_exact(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
            }
            prev = akk;
        }
        let det = a[n * n - 1].clone();
        if negate {
            det.neg()
        } else {
            det
        }
    }

    /// Coefficients of `det(I - s*self)` (lowest degree first) by
    /// Berkowitz's division-free algorithm.
    pub fn char_coeffs_berkowitz(&self) -> Vec<R> {
        let n = self.dim();
        // `poly` holds det(lambda*I - A_r) for the leading r x r block,
        // highest degree first.
        let mut poly = vec![R::one()];
        for r in 0..n {
            let a_rr = self.get(r, r).clone();
            // toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^(r-1) C
            let mut col = Vec::with_capacity(r + 2);
            col.push(R::one());
            col.push(a_rr.neg());
            let mut v: Vec<R> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for step in 0..r {
                let rc = (0..r).fold(R::zero(), |acc, j| acc.add(&self.get(r, j).mul(&v[j])));
                col.push(rc.neg());
                if step + 1 < r {
                    v = (0..r)
                        .map(|i| (0..r).fold(R::zero(), |acc, j| acc.add(&self.get(i, j).mul(&v[j]))))
                        .collect();
                }
            }
            let mut next = vec![R::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, p) in poly.iter().enumerate() {
                    if i >= j && i - j < col.len() {
                        *slot = slot.add(&col[i - j].mul(p));
                    }
                }
            }
            poly = next;
        }
        // det(lambda*I - A) = sum_k c_k lambda^(n-k)  ==>  det(I - s*A) = sum_k c_k s^k
        poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, MultiPoly, Rational, UniPoly, VarRegistry};
    use proptest::prelude::*;

    /// Laplace expansion along the first row; independent reference for small n.
    fn det_cofactor<R: Ring>(m: &RingMatrix<R>) -> R {
        let n = m.dim();
        if n == 0 {
            return R::one();
        }
        let mut total = R::zero();
        for j in 0..n {
            let keep: Vec<usize> = (0..n).collect();
            let rows: Vec<usize> = keep[1..].to_vec();
            let cols: Vec<usize> = keep.iter().copied().filter(|&c| c != j).collect();
            let sub = RingMatrix::from_fn(n - 1, |a, b| m.get(rows[a], cols[b]).clone());
            let term = m.get(0, j).mul(&det_cofactor(&sub));
            total = if j % 2 == 0 { total.add(&term) } else { total.sub(&term) };
        }
        total
    }

    fn int_matrix(n: usize, vals: &[i64]) -> RingMatrix<Rational> {
        RingMatrix::from_fn(n, |i, j| rational(vals[i * n + j], 1))
    }

    #[test]
    fn empty_and_identity() {
        assert_eq!(RingMatrix::<Rational>::zeros(0).det(), rational(1, 1));
        assert_eq!(RingMatrix::<Rational>::identity(3).det(), rational(1, 1));
    }

    #[test]
    fn two_by_two_in_s() {
        let mut reg = VarRegistry::new();
        let s = reg.var("s");
        let one = MultiPoly::one();
        let m = RingMatrix::from_rows(vec![vec![one.clone(), s.neg()], vec![s.neg(), one.clone()]])
            .unwrap();
        assert_eq!(m.det(), one.sub(&s.mul(&s)));
    }

    #[test]
    fn minor_of_three_cycle_laplacian() {
        // directed 3-cycle 0->1->2->0 with unit weights
        let l = int_matrix(3, &[1, -1, 0, 0, 1, -1, -1, 0, 1]);
        let m = l.minor(&[1]).unwrap();
        assert_eq!(m, RingMatrix::new(vec![0, 2], vec![
            rational(1, 1), rational(0, 1), rational(-1, 1), rational(1, 1),
        ]).unwrap());
        assert_eq!(m.det(), rational(1, 1));
        assert_eq!(l.minor(&[]).unwrap(), l);
        assert_eq!(l.minor(&[0, 1, 2]).unwrap().dim(), 0);
        assert_eq!(l.minor(&[7]), Err(Error::UnknownLabel(7)));
    }

    #[test]
    fn shape_errors() {
        assert!(RingMatrix::<Rational>::new(vec![0, 1], vec![rational(1, 1); 3]).is_err());
        assert!(RingMatrix::<Rational>::new(vec![0, 0], vec![rational(1, 1); 4]).is_err());
        assert!(RingMatrix::<Rational>::zeros(2).add(&RingMatrix::zeros(3)).is_err());
    }

    #[test]
    fn uniform_k3_char_poly() {
        let half = rational(1, 2);
        let p = RingMatrix::from_fn(3, |i, j| if i == j { rational(0, 1) } else { half.clone() });
        let c = UniPoly::new(p.char_coeffs_berkowitz());
        let expect = UniPoly::new(vec![rational(1, 1), rational(0, 1), rational(-3, 4), rational(-1, 4)]);
        assert_eq!(c, expect);
    }

    fn small_matrix(max_n: usize) -> impl Strategy<Value = RingMatrix<Rational>> {
        (0..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(-6i64..=6, n * n).prop_map(move |v| int_matrix(n, &v))
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(m in small_matrix(5)) {
            prop_assert_eq!(m.det_bareiss(), det_cofactor(&m));
        }

        #[test]
        fn berkowitz_matches_determinant_pencil(m in small_matrix(4), s in -4i64..=4) {
            // det(I - s*M) evaluated at an integer s against a direct determinant
            let n = m.dim();
            let sq = rational(s, 1);
            let pencil = RingMatrix::identity(n).sub(&m.scale(&sq)).unwrap();
            let coeffs = UniPoly::new(m.char_coeffs_berkowitz());
            prop_assert_eq!(coeffs.eval(&sq), det_cofactor(&pencil));
        }

        #[test]
        fn det_commutes_with_evaluation(
            coeffs in proptest::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3), 16),
            x in -5i64..=5,
            y in -5i64..=5,
        ) {
            let mut reg = VarRegistry::new();
            let xv = reg.var("x");
            let yv = reg.var("y");
            let m = RingMatrix::from_fn(4, |i, j| {
                let (a, b, c) = coeffs[i * 4 + j];
                MultiPoly::from_int(a).add(&xv.mul(&MultiPoly::from_int(b))).add(&yv.mul(&yv).mul(&MultiPoly::from_int(c)))
            });
            let point = [rational(x, 1), rational(y, 1)];
            let evaluated = m.try_map(|p| p.evaluate(&point)).unwrap();
            prop_assert_eq!(m.det().evaluate(&point).unwrap(), evaluated.det_bareiss());
        }
    }
}
