//! Tunable limits for the identity checks and the seeded source of random
//! evaluation points and edge orderings.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Rational;
use crate::lift::DEFAULT_LIFT_CAP;

pub const DEFAULT_SEED: u64 = 20_150_607;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Largest matrix dimension handled with fully symbolic determinants.
    pub symbolic_cap: usize,
    /// Random rational points used above the symbolic cap.
    pub eval_points: usize,
    pub series_order: usize,
    pub lift_cap: usize,
    /// Longest closed walk whose lifts are counted.
    pub walk_len: usize,
    /// Random edge orderings tried by the exploration checks.
    pub orderings: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            symbolic_cap: 12,
            eval_points: 3,
            series_order: 8,
            lift_cap: DEFAULT_LIFT_CAP,
            walk_len: 6,
            orderings: 20,
            seed: DEFAULT_SEED,
        }
    }
}

impl CheckConfig {
    pub fn use_symbolic(&self, dim: usize) -> bool {
        dim <= self.symbolic_cap
    }
}

/// Deterministic stream of random rationals and permutations.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `p/q` with `p` and `q` uniform in `1..=1000`.
    pub fn rational(&mut self) -> Rational {
        let p: i64 = self.rng.gen_range(1..=1000);
        let q: i64 = self.rng.gen_range(1..=1000);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn rationals(&mut self, count: usize) -> Vec<Rational> {
        (0..count).map(|_| self.rational()).collect()
    }

    /// Random rational in the open interval `(0, 1)`, with denominator at
    /// most 1000.
    pub fn unit_interval(&mut self) -> Rational {
        let q: i64 = self.rng.gen_range(2..=1000);
        let p: i64 = self.rng.gen_range(1..q);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng);
        perm
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}
