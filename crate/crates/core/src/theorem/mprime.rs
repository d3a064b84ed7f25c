use alloc::format;
use alloc::vec::Vec;

use crate::algebra::Ring;
use crate::arborescence::k_count;
use crate::graph::{Digraph, VertexSet};
use crate::{Error, Result};

/// Forest counts `k(W)` and exponents `m'(W)` for every strongly connected
/// subset, in canonical subset order.
///
/// `m'` is defined by `k(W) = sum m'(W')` over strongly connected `W'`
/// containing `W`, solved from the largest sets down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPrimeTable {
    n: usize,
    entries: Vec<(VertexSet, u64, i64)>,
}

impl MPrimeTable {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// `(W, k(W), m'(W))` rows.
    pub fn entries(&self) -> &[(VertexSet, u64, i64)] {
        &self.entries
    }

    pub fn sets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    fn find(&self, w: VertexSet) -> Option<&(VertexSet, u64, i64)> {
        self.entries.iter().find(|e| e.0 == w)
    }

    pub fn m_prime(&self, w: VertexSet) -> Option<i64> {
        self.find(w).map(|e| e.2)
    }

    pub fn k(&self, w: VertexSet) -> Option<u64> {
        self.find(w).map(|e| e.1)
    }

    /// Proper strongly connected subsets with their exponents.
    pub fn proper(&self) -> impl Iterator<Item = (VertexSet, i64)> + '_ {
        let full = VertexSet::full(self.n);
        self.entries.iter().filter(move |e| e.0 != full).map(|e| (e.0, e.2))
    }

    /// Entries with `m'(W) < 0`. None are expected; they are reported as
    /// findings rather than errors.
    pub fn negative_entries(&self) -> Vec<(VertexSet, i64)> {
        self.entries.iter().filter(|e| e.2 < 0).map(|e| (e.0, e.2)).collect()
    }
}

pub fn m_prime<R: Ring>(g: &Digraph<R>) -> Result<MPrimeTable> {
    g.require_strongly_connected()?;
    let sets = g.strongly_connected_subsets()?;
    let mut entries: Vec<(VertexSet, u64, i64)> = Vec::with_capacity(sets.len());
    for w in sets {
        let k = k_count(g, w)?;
        // canonical order puts every strict superset earlier
        let above: i64 = entries
            .iter()
            .filter(|e| w.is_subset(e.0) && w != e.0)
            .map(|e| e.2)
            .sum();
        entries.push((w, k, k as i64 - above));
    }
    Ok(MPrimeTable {
        n: g.vertex_count(),
        entries,
    })
}

/// Check `k(W) - 1 = sum m'(W')` over proper strongly connected `W' ⊇ W`, for
/// every proper strongly connected `W`. Returns how many sets were checked.
pub fn m_condition_check(table: &MPrimeTable) -> Result<usize> {
    let mut checked = 0;
    for (w, k, _) in table.entries() {
        if *w == VertexSet::full(table.n) {
            continue;
        }
        let sum: i64 = table.proper().filter(|(u, _)| w.is_subset(*u)).map(|(_, m)| m).sum();
        if *k as i64 - 1 != sum {
            return Err(Error::violation(
                "m-condition",
                format!("W = {w}: k(W) - 1 = {}, exponent sum = {sum}", *k as i64 - 1),
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn k3_table() {
        let t = m_prime(&k3()).unwrap();
        assert_eq!(t.m_prime(set(&[0, 1, 2])), Some(1));
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(t.m_prime(set(&pair)), Some(1));
        }
        for v in 0..3 {
            assert_eq!(t.m_prime(set(&[v])), Some(0));
            assert_eq!(t.k(set(&[v])), Some(3));
        }
        assert!(t.negative_entries().is_empty());
        assert_eq!(m_condition_check(&t), Ok(6));
    }

    #[test]
    fn three_cycle_table() {
        let t = m_prime(&cycle3()).unwrap();
        assert_eq!(t.entries().len(), 4);
        assert_eq!(t.m_prime(set(&[0, 1, 2])), Some(1));
        for v in 0..3 {
            assert_eq!(t.m_prime(set(&[v])), Some(0));
        }
        assert_eq!(m_condition_check(&t), Ok(3));
    }

    #[test]
    fn two_cycle_table() {
        let t = m_prime(&two_cycle()).unwrap();
        assert_eq!(t.m_prime(set(&[0, 1])), Some(1));
        assert_eq!(t.m_prime(set(&[0])), Some(0));
        assert_eq!(t.m_prime(set(&[1])), Some(0));
    }

    #[test]
    fn single_vertex() {
        let g = unit(1, &[]);
        let t = m_prime(&g).unwrap();
        assert_eq!(t.entries(), &[(set(&[0]), 1, 1)]);
        assert_eq!(m_condition_check(&t), Ok(0));
    }

    #[test]
    fn tampered_table_is_caught() {
        let mut t = m_prime(&k3()).unwrap();
        t.entries[1].2 += 1;
        assert!(m_condition_check(&t).unwrap_err().is_violation());
    }

    #[test]
    fn requires_strong_connectivity() {
        assert_eq!(m_prime(&unit(2, &[(0, 1)])), Err(Error::NotStronglyConnected));
    }
}
