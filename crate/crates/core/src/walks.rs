//! Based closed walks grouped by length and by the set of vertices visited.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{Rational, Ring};
use crate::graph::{Digraph, VertexSet};
use crate::{Error, Result};

/// Walk lengths above this are refused; the table costs
/// `2^|V| * |V|^2 * max_len` ring operations.
pub const MAX_WALK_LEN: usize = 32;

/// Total weight of based closed walks, keyed by length and support.
///
/// A based closed walk of length `n` is a vertex sequence `v_1 .. v_n` with
/// steps `v_k -> v_{k+1}` and a closing step `v_n -> v_1`; a step from a
/// vertex to itself uses that vertex's diagonal weight. Walks are counted
/// with their starting point distinguished.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkSupportTable<R> {
    max_len: usize,
    by_len: Vec<BTreeMap<VertexSet, R>>,
}

impl<R: Ring> WalkSupportTable<R> {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Weight of length-`n` walks with support exactly `w`.
    pub fn get(&self, n: usize, w: VertexSet) -> R {
        self.by_len
            .get(n)
            .and_then(|m| m.get(&w))
            .cloned()
            .unwrap_or_else(R::zero)
    }

    /// Nonzero entries at length `n`, keyed by support.
    pub fn supports(&self, n: usize) -> impl Iterator<Item = (&VertexSet, &R)> {
        self.by_len[n].iter()
    }

    /// Weight of all length-`n` walks.
    pub fn total(&self, n: usize) -> R {
        R::sum(self.by_len[n].values())
    }

    /// Weight of length-`n` walks using only vertices of `w`.
    pub fn total_within(&self, n: usize, w: VertexSet) -> R {
        R::sum(
            self.by_len[n]
                .iter()
                .filter(|(s, _)| s.is_subset(w))
                .map(|(_, v)| v),
        )
    }
}

/// Dynamic program over (current vertex, visited set) for each start vertex.
pub fn closed_walk_support_sums<R: Ring>(
    g: &Digraph<R>,
    max_len: usize,
) -> Result<WalkSupportTable<R>> {
    if max_len == 0 {
        return Err(Error::Precondition("walk length must be at least 1".into()));
    }
    if max_len > MAX_WALK_LEN {
        return Err(Error::CapExceeded {
            what: "closed walk length",
            size: max_len as u128,
            cap: MAX_WALK_LEN as u128,
        });
    }
    g.require_set_sized()?;
    let n = g.vertex_count();
    let mut by_len: Vec<BTreeMap<VertexSet, R>> = (0..=max_len).map(|_| BTreeMap::new()).collect();
    // successors including diagonal self-steps
    let steps: Vec<Vec<(usize, R)>> = (0..n)
        .map(|v| {
            let mut s: Vec<(usize, R)> = g
                .out_edges(v)
                .iter()
                .map(|&k| (g.edge(k).target, g.edge(k).weight.clone()))
                .collect();
            if !g.diagonal()[v].is_zero() {
                s.push((v, g.diagonal()[v].clone()));
            }
            s
        })
        .collect();
    for start in 0..n {
        let mut layer: BTreeMap<(usize, VertexSet), R> = BTreeMap::new();
        layer.insert((start, VertexSet::singleton(start)), R::one());
        for len in 1..=max_len {
            let mut next: BTreeMap<(usize, VertexSet), R> = BTreeMap::new();
            for ((v, seen), weight) in &layer {
                for (u, w) in &steps[*v] {
                    let key = (*u, seen.with(*u));
                    let add = weight.mul(w);
                    next.entry(key)
                        .and_modify(|acc| *acc = acc.add(&add))
                        .or_insert(add);
                }
            }
            for ((v, seen), weight) in &next {
                if *v == start && !weight.is_zero() {
                    let slot = by_len[len].entry(*seen).or_insert_with(R::zero);
                    *slot = slot.add(weight);
                }
            }
            layer = next;
        }
    }
    for m in &mut by_len {
        m.retain(|_, v| !v.is_zero());
    }
    Ok(WalkSupportTable { max_len, by_len })
}

/// Total weight of based closed walks of each length `1..=max_len`; entry 0
/// is zero. Weights are scaled to integers by their common denominator `D`,
/// walks are summed over big integers and the length-`n` sum is divided by
/// `D^n`.
pub fn closed_walk_totals(g: &Digraph<Rational>, max_len: usize) -> Result<Vec<Rational>> {
    if max_len > MAX_WALK_LEN {
        return Err(Error::CapExceeded {
            what: "closed walk length",
            size: max_len as u128,
            cap: MAX_WALK_LEN as u128,
        });
    }
    let n = g.vertex_count();
    let d = g
        .edges()
        .iter()
        .map(|e| &e.weight)
        .chain(g.diagonal())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let integral = |q: &Rational| q.numer() * (&d / q.denom());
    let edges: Vec<(usize, usize, BigInt)> = g
        .edges()
        .iter()
        .map(|e| (e.source, e.target, integral(&e.weight)))
        .collect();
    let diagonal: Vec<BigInt> = g.diagonal().iter().map(integral).collect();
    let mut sums = vec![BigInt::zero(); max_len + 1];
    for start in 0..n {
        let mut layer = vec![BigInt::zero(); n];
        layer[start] = BigInt::one();
        for sum in sums.iter_mut().skip(1) {
            let mut next: Vec<BigInt> = layer.iter().zip(&diagonal).map(|(x, w)| x * w).collect();
            for (u, v, w) in &edges {
                if !layer[*u].is_zero() {
                    next[*v] += &layer[*u] * w;
                }
            }
            *sum += &next[start];
            layer = next;
        }
    }
    let mut power = BigInt::one();
    Ok(sums
        .into_iter()
        .map(|sum| {
            let q = Rational::new(sum, power.clone());
            power *= &d;
            q
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Rational, RingMatrix};
    use crate::graph::fixtures::*;
    use crate::graph::Edge;
    use proptest::prelude::*;

    #[test]
    fn uniform_k3_two_walks() {
        let t = closed_walk_support_sums(&uniform_k3(), 3).unwrap();
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(t.get(2, VertexSet::from_iter(pair)), rational(1, 2));
        }
        assert_eq!(t.total(2), rational(3, 2));
        assert_eq!(t.total(1), rational(0, 1));
    }

    #[test]
    fn length_one_is_the_diagonal() {
        let g = uniform_k3()
            .with_diagonal(vec![rational(1, 5), rational(0, 1), rational(2, 7)])
            .unwrap();
        let t = closed_walk_support_sums(&g, 1).unwrap();
        assert_eq!(t.get(1, VertexSet::singleton(0)), rational(1, 5));
        assert_eq!(t.get(1, VertexSet::singleton(1)), rational(0, 1));
        assert_eq!(t.get(1, VertexSet::singleton(2)), rational(2, 7));
    }

    #[test]
    fn three_cycle_rotations() {
        let t = closed_walk_support_sums(&cycle3(), 3).unwrap();
        assert_eq!(t.supports(3).count(), 1);
        assert_eq!(t.get(3, VertexSet::full(3)), rational(3, 1));
    }

    #[test]
    fn length_limits() {
        assert!(closed_walk_support_sums(&cycle3(), 0).is_err());
        assert!(closed_walk_support_sums(&cycle3(), MAX_WALK_LEN + 1).is_err());
    }

    fn random_graph() -> impl Strategy<Value = Digraph<Rational>> {
        (2usize..=4).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            let m = pairs.len();
            (
                proptest::collection::vec(proptest::option::of((1i64..9, 1i64..9)), m),
                proptest::collection::vec((0i64..4, 1i64..5), n),
            )
                .prop_map(move |(ws, ds)| {
                    let edges = pairs
                        .iter()
                        .zip(ws)
                        .filter_map(|(&(u, v), w)| {
                            w.map(|(a, b)| Edge { source: u, target: v, weight: rational(a, b) })
                        })
                        .collect();
                    let diag = ds.into_iter().map(|(a, b)| rational(a, b)).collect();
                    Digraph::new(n, edges, Some(diag)).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn totals_are_traces_of_powers(g in random_graph()) {
            let t = closed_walk_support_sums(&g, 6).unwrap();
            let m = g.weight_matrix();
            let mut power = RingMatrix::identity(g.vertex_count());
            for len in 1..=6 {
                power = power.mul(&m).unwrap();
                prop_assert_eq!(t.total(len), power.trace());
            }
            let totals = closed_walk_totals(&g, 6).unwrap();
            prop_assert_eq!(totals[0].clone(), rational(0, 1));
            for len in 1..=6 {
                prop_assert_eq!(&totals[len], &t.total(len));
            }
        }

        #[test]
        fn supports_are_strongly_connected(g in random_graph()) {
            let t = closed_walk_support_sums(&g, 5).unwrap();
            for len in 1..=5 {
                for (w, _) in t.supports(len) {
                    prop_assert!(g.is_strongly_connected_set(*w));
                }
            }
        }
    }
}
