//! Multi-modular exact linear algebra over the integers.
//!
//! Rational matrices are scaled row by row to integer matrices, reduced
//! modulo word-sized primes, solved there, and the integer result is
//! recovered by Chinese remaindering once the product of the primes exceeds
//! twice an a-priori bound on the answer. The answer is therefore exact,
//! never probabilistic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Rational, RingMatrix};

/// Primes just below 2^62, largest first. Sums of two residues fit in u64.
const PRIMES: &[u64] = &[
    0x3fffffffffffffc7,
    0x3fffffffffffffa9,
    0x3fffffffffffff8b,
    0x3fffffffffffff71,
    0x3fffffffffffff67,
    0x3fffffffffffff59,
    0x3fffffffffffff55,
    0x3fffffffffffff3d,
    0x3fffffffffffff35,
    0x3ffffffffffffeef,
    0x3ffffffffffffee1,
    0x3ffffffffffffec3,
    0x3ffffffffffffe45,
    0x3ffffffffffffe1d,
    0x3ffffffffffffe11,
    0x3ffffffffffffdc1,
    0x3ffffffffffffdbb,
    0x3ffffffffffffda5,
    0x3ffffffffffffd87,
    0x3ffffffffffffd69,
    0x3ffffffffffffd03,
    0x3ffffffffffffcfb,
    0x3ffffffffffffcf7,
    0x3ffffffffffffce9,
    0x3ffffffffffffcd3,
    0x3ffffffffffffcc1,
    0x3ffffffffffffc65,
    0x3ffffffffffffc2b,
    0x3ffffffffffffc1f,
    0x3ffffffffffffc17,
    0x3ffffffffffffc11,
    0x3ffffffffffffc07,
    0x3ffffffffffffb53,
    0x3ffffffffffffb27,
    0x3ffffffffffffaf3,
    0x3ffffffffffffab7,
    0x3ffffffffffffa67,
    0x3ffffffffffffa15,
    0x3ffffffffffff9ef,
    0x3ffffffffffff9d9,
    0x3ffffffffffff9d3,
    0x3ffffffffffff9c5,
    0x3ffffffffffff9af,
    0x3ffffffffffff977,
    0x3ffffffffffff95f,
    0x3ffffffffffff95b,
    0x3ffffffffffff959,
    0x3ffffffffffff8e1,
    0x3ffffffffffff8a7,
    0x3ffffffffffff889,
    0x3ffffffffffff87d,
    0x3ffffffffffff805,
    0x3ffffffffffff7e7,
    0x3ffffffffffff7c9,
    0x3ffffffffffff7a3,
    0x3ffffffffffff775,
    0x3ffffffffffff757,
    0x3ffffffffffff739,
    0x3ffffffffffff713,
    0x3ffffffffffff6d1,
    0x3ffffffffffff6c1,
    0x3ffffffffffff6b9,
    0x3ffffffffffff6a3,
    0x3ffffffffffff68b
,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Endless stream of distinct primes: the table first, then Miller-Rabin
/// search downward from the smallest tabled prime.
fn primes() -> impl Iterator<Item = u64> {
    let mut next = PRIMES[PRIMES.len() - 1];
    PRIMES.iter().copied().chain(core::iter::from_fn(move || {
        loop {
            next -= 2;
            if is_prime(next) {
                return Some(next);
            }
        }
    }))
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().expect("residue fits");
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

/// Incremental Garner reconstruction of one integer.
struct Crt {
    value: BigInt,
    modulus: BigInt,
}

impl Crt {
    fn new() -> Self {
        Crt {
            value: BigInt::zero(),
            modulus: BigInt::one(),
        }
    }

    fn push(&mut self, residue: u64, p: u64) {
        let current = reduce(&self.value, p);
        let m_inv = inv_mod(reduce(&self.modulus, p), p);
        let t = mul_mod((residue + p - current) % p, m_inv, p);
        self.value += &self.modulus * BigInt::from(t);
        self.modulus *= BigInt::from(p);
    }

    /// Representative in `(-M/2, M/2]`.
    fn symmetric(&self) -> BigInt {
        let half: BigInt = &self.modulus >> 1;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

fn bits(x: &BigUint) -> u64 {
    x.bits()
}

/// Smallest `b` with `sqrt(sum of squares of row) <= 2^b`.
fn row_norm_bits(row: &[BigInt]) -> u64 {
    let sq: BigUint = row
        .iter()
        .map(|x| {
            let m = x.magnitude();
            m * m
        })
        .sum();
    bits(&sq).div_ceil(2)
}

/// Integer matrix of a rational one, each row multiplied by the least common
/// multiple of its denominators. Returns the integer rows and the factors.
fn clear_row_denominators(m: &RingMatrix<Rational>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let n = m.dim();
    let mut rows = Vec::with_capacity(n);
    let mut factors = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        rows.push(
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect::<Vec<_>>(),
        );
        factors.push(lcm);
    }
    (rows, factors)
}

/// Determinant of a matrix over Z/p by Gaussian elimination.
fn det_mod(a: &mut [u64], n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in k..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = (p - det) % p;
        }
        let akk = a[k * n + k];
        det = mul_mod(det, akk, p);
        let inv = inv_mod(akk, p);
        for i in k + 1..n {
            let f = mul_mod(a[i * n + k], inv, p);
            if f == 0 {
                continue;
            }
            for j in k + 1..n {
                let sub = mul_mod(f, a[k * n + j], p);
                a[i * n + j] = (a[i * n + j] + p - sub) % p;
            }
        }
    }
    det
}

/// Characteristic polynomial `det(lambda*I - A)` over Z/p, highest degree
/// first, via reduction to upper Hessenberg form.
fn char_poly_mod(a: &mut [u64], n: usize, p: u64) -> Vec<u64> {
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| a[i * n + m - 1] != 0) else {
            continue;
        };
        if piv != m {
            for j in 0..n {
                a.swap(piv * n + j, m * n + j);
            }
            for i in 0..n {
                a.swap(i * n + piv, i * n + m);
            }
        }
        let inv = inv_mod(a[m * n + m - 1], p);
        for i in m + 1..n {
            let u = mul_mod(a[i * n + m - 1], inv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let sub = mul_mod(u, a[m * n + j], p);
                a[i * n + j] = (a[i * n + j] + p - sub) % p;
            }
            for r in 0..n {
                let add = mul_mod(u, a[r * n + i], p);
                a[r * n + m] = (a[r * n + m] + add) % p;
            }
        }
    }
    // polys[k] = char poly of the leading k x k block, lowest degree first
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for m in 1..=n {
        let h = a[(m - 1) * n + m - 1];
        let prev = &polys[m - 1];
        let mut next = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - mul_mod(h, c, p)) % p;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = mul_mod(t, a[(m - i) * n + m - i - 1], p);
            let coef = mul_mod(t, a[(m - i - 1) * n + m - 1], p);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                next[k] = (next[k] + p - mul_mod(coef, c, p)) % p;
            }
        }
        polys.push(next);
    }
    let mut out = polys.pop().expect("at least the constant polynomial");
    out.reverse();
    out
}

fn residues(rows: &[Vec<BigInt>], p: u64) -> Vec<u64> {
    rows.iter().flat_map(|r| r.iter().map(|x| reduce(x, p))).collect()
}

/// Exact determinant of an integer matrix given as rows.
pub fn det_integer(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
        return BigInt::zero();
    }
    // Hadamard: |det| <= prod ||row||, and the modulus must exceed 2*bound.
    let bound_bits: u64 = rows.iter().map(|r| row_norm_bits(r)).sum::<u64>() + 2;
    let mut crt = Crt::new();
    for p in primes() {
        let mut a = residues(rows, p);
        crt.push(det_mod(&mut a, n, p), p);
        if crt.modulus.bits() > bound_bits {
            break;
        }
    }
    crt.symmetric()
}

/// Exact determinant of a rational matrix.
pub fn det_rational(m: &RingMatrix<Rational>) -> Rational {
    let (rows, factors) = clear_row_denominators(m);
    let scale = factors.iter().fold(BigInt::one(), |acc, f| acc * f);
    Rational::new(det_integer(&rows), scale)
}

/// Coefficients of `det(I - s*M)` (lowest degree first) for a rational `M`.
///
/// With `d_i` the denominator of row `i` and `A = diag(d) M` integral,
/// `det(I - sM) = det(diag(d) - sA) / prod d_i`. Modulo `p` the integer
/// polynomial `det(diag(d) - sA)` is `det(diag(d))` times the reversed
/// characteristic polynomial of `diag(d)^-1 A`.
pub fn char_coeffs_rational(m: &RingMatrix<Rational>) -> Vec<Rational> {
    let n = m.dim();
    let (rows, factors) = clear_row_denominators(m);
    // every coefficient is bounded by prod_i (d_i + ||a_i||)
    let bound_bits: u64 = rows
        .iter()
        .zip(&factors)
        .map(|(r, d)| row_norm_bits(r).max(d.bits()) + 1)
        .sum::<u64>()
        + 2;
    let mut crts: Vec<Crt> = (0..=n).map(|_| Crt::new()).collect();
    let mut modulus_bits = 0;
    for p in primes() {
        let d_mod: Vec<u64> = factors.iter().map(|d| reduce(d, p)).collect();
        if d_mod.contains(&0) {
            continue;
        }
        let mut a = residues(&rows, p);
        let mut det_d = 1u64;
        for (i, &d) in d_mod.iter().enumerate() {
            det_d = mul_mod(det_d, d, p);
            let inv = inv_mod(d, p);
            for j in 0..n {
                a[i * n + j] = mul_mod(a[i * n + j], inv, p);
            }
        }
        let chi = char_poly_mod(&mut a, n, p);
        for (k, c) in chi.iter().enumerate() {
            crts[k].push(mul_mod(*c, det_d, p), p);
        }
        modulus_bits = crts[0].modulus.bits();
        if modulus_bits > bound_bits {
            break;
        }
    }
    debug_assert!(modulus_bits > bound_bits);
    let scale = factors.iter().fold(BigInt::one(), |acc, f| acc * f);
    crts.iter()
        .map(|c| Rational::new(c.symmetric(), scale.clone()))
        .collect()
}

/// Number of rooted spanning trees of a 0/1 digraph, from integer
/// Laplacian minors. `adjacency[i]` lists the out-neighbours of `i`.
pub fn count_rooted_trees(adjacency: &[Vec<usize>]) -> BigInt {
    let n = adjacency.len();
    let mut total = BigInt::zero();
    for root in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let rows: Vec<Vec<BigInt>> = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| {
                        if i == j {
                            BigInt::from(adjacency[i].len())
                        } else if adjacency[i].contains(&j) {
                            BigInt::from(-1)
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        total += det_integer(&rows);
    }
    debug_assert!(total.sign() != Sign::Minus);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use proptest::prelude::*;

    #[test]
    fn prime_table_is_prime_and_descending() {
        assert!(PRIMES.iter().all(|&p| is_prime(p) && p < 1 << 62));
        assert!(PRIMES.windows(2).all(|w| w[0] > w[1]));
        let more: Vec<u64> = primes().skip(PRIMES.len()).take(3).collect();
        assert!(more.iter().all(|&p| is_prime(p) && p < PRIMES[PRIMES.len() - 1]));
    }

    #[test]
    fn crt_recovers_negative_values() {
        let x = BigInt::from(-123456789012345678i64) * BigInt::from(987654321i64);
        let mut crt = Crt::new();
        for p in primes().take(3) {
            crt.push(reduce(&x, p), p);
        }
        assert_eq!(crt.symmetric(), x);
    }

    #[test]
    fn complete_digraph_tree_counts() {
        // K_n has n^(n-1) rooted spanning trees
        for n in 1..=6usize {
            let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
            assert_eq!(count_rooted_trees(&adj), BigInt::from(n.pow(n as u32 - 1)));
        }
    }

    fn rational_matrix(max_n: usize) -> impl Strategy<Value = RingMatrix<Rational>> {
        (0..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((-40i64..=40, 1i64..=12), n * n).prop_map(move |v| {
                RingMatrix::from_fn(n, |i, j| {
                    let (a, b) = v[i * n + j];
                    rational(a, b)
                })
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn modular_det_matches_bareiss(m in rational_matrix(10)) {
            prop_assert_eq!(det_rational(&m), m.det_bareiss());
        }

        #[test]
        fn modular_char_poly_matches_berkowitz(m in rational_matrix(9)) {
            prop_assert_eq!(char_coeffs_rational(&m), m.char_coeffs_berkowitz());
        }

        #[test]
        fn sparse_singular_matrices(n in 2usize..9, seed in proptest::collection::vec(0u8..4, 81)) {
            // mostly-zero matrices exercise the pivot search and early zero exits
            let m = RingMatrix::from_fn(n, |i, j| {
                let v = seed[i * 9 + j];
                if v == 3 { rational(j as i64 - 2, 3) } else { rational(0, 1) }
            });
            prop_assert_eq!(det_rational(&m), m.det_bareiss());
            prop_assert_eq!(char_coeffs_rational(&m), m.char_coeffs_berkowitz());
        }
    }
}
