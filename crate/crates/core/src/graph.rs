//! Weighted digraphs, vertex sets and strong connectivity.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{MultiPoly, Rational, Ring, RingMatrix};
use crate::{Error, Result};

/// Largest vertex count for which subsets of `V` are handled as bitsets.
pub const MAX_SET_VERTICES: usize = 64;

/// Brute-force subset enumeration visits `2^n` sets; refuse beyond this.
pub const MAX_SUBSET_ENUMERATION: usize = 20;

/// Set of vertices of a graph with at most 64 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_SET_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> Self {
        VertexSet(self.0 & !other.0)
    }

    /// `{0..n} \ self`.
    pub fn complement(self, n: usize) -> Self {
        VertexSet::full(n).difference(self)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Canonical order used throughout: larger sets first, then
    /// lexicographic on the sorted member lists.
    pub fn canonical_cmp(&self, other: &Self) -> core::cmp::Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.to_vec().cmp(&other.to_vec()))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<R> {
    pub source: usize,
    pub target: usize,
    pub weight: R,
}

/// Simple weighted digraph. Self-transitions are not edges; they live in a
/// per-vertex diagonal that defaults to zero.
///
/// Edges are kept sorted by `(source, target)`; an edge's index is its
/// position in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct Digraph<R> {
    n: usize,
    edges: Vec<Edge<R>>,
    diagonal: Vec<R>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl<R: Ring> Digraph<R> {
    pub fn new(n: usize, mut edges: Vec<Edge<R>>, diagonal: Option<Vec<R>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        for e in &edges {
            if e.source >= n || e.target >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {} -> {} references a vertex outside 0..{n}",
                    e.source, e.target
                )));
            }
            if e.source == e.target {
                return Err(Error::InvalidGraph(format!(
                    "self-loop at {} (use the diagonal instead)",
                    e.source
                )));
            }
        }
        edges.sort_by_key(|e| (e.source, e.target));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target))
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {} -> {}",
                w[0].source, w[0].target
            )));
        }
        let diagonal = match diagonal {
            Some(d) if d.len() != n => {
                return Err(Error::InvalidGraph("diagonal length differs from vertex count".into()))
            }
            Some(d) => d,
            None => vec![R::zero(); n],
        };
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            out_adj[e.source].push(k);
            in_adj[e.target].push(k);
        }
        Ok(Digraph {
            n,
            edges,
            diagonal,
            out_adj,
            in_adj,
        })
    }

    /// Convenience constructor from `(source, target, weight)` triples.
    pub fn from_triples(n: usize, triples: Vec<(usize, usize, R)>) -> Result<Self> {
        let edges = triples
            .into_iter()
            .map(|(source, target, weight)| Edge {
                source,
                target,
                weight,
            })
            .collect();
        Self::new(n, edges, None)
    }

    pub fn with_diagonal(mut self, diagonal: Vec<R>) -> Result<Self> {
        if diagonal.len() != self.n {
            return Err(Error::InvalidGraph("diagonal length differs from vertex count".into()));
        }
        self.diagonal = diagonal;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<R>] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge<R> {
        &self.edges[k]
    }

    pub fn diagonal(&self) -> &[R] {
        &self.diagonal
    }

    /// Edge indices leaving `v`, sorted by target.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Edge indices entering `v`, sorted by source.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_adj[v].iter().map(|&k| self.edges[k].target)
    }

    pub fn edge_index(&self, source: usize, target: usize) -> Option<usize> {
        let adj = &self.out_adj[source];
        adj.binary_search_by_key(&target, |&k| self.edges[k].target)
            .ok()
            .map(|pos| adj[pos])
    }

    pub fn weight(&self, source: usize, target: usize) -> Option<&R> {
        self.edge_index(source, target).map(|k| &self.edges[k].weight)
    }

    /// Sum of the weights leaving `v` (diagonal excluded).
    pub fn out_weight(&self, v: usize) -> R {
        R::sum(self.out_adj[v].iter().map(|&k| &self.edges[k].weight))
    }

    /// Full weight matrix: `M[i][j]` is the weight of `i -> j`, and
    /// `M[i][i]` is the diagonal entry.
    pub fn weight_matrix(&self) -> RingMatrix<R> {
        let mut m = RingMatrix::diagonal(&self.diagonal);
        for e in &self.edges {
            m.set(e.source, e.target, e.weight.clone());
        }
        m
    }

    pub fn map_weights<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> Digraph<S> {
        Digraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    source: e.source,
                    target: e.target,
                    weight: f(&e.weight),
                })
                .collect(),
            diagonal: self.diagonal.iter().map(&mut f).collect(),
            out_adj: self.out_adj.clone(),
            in_adj: self.in_adj.clone(),
        }
    }

    pub fn try_map_weights<S: Ring>(
        &self,
        mut f: impl FnMut(&R) -> Result<S>,
    ) -> Result<Digraph<S>> {
        Ok(Digraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    Ok(Edge {
                        source: e.source,
                        target: e.target,
                        weight: f(&e.weight)?,
                    })
                })
                .collect::<Result<_>>()?,
            diagonal: self.diagonal.iter().map(&mut f).collect::<Result<_>>()?,
            out_adj: self.out_adj.clone(),
            in_adj: self.in_adj.clone(),
        })
    }

    /// Multiply every weight leaving `i` (diagonal included) by `factors[i]`,
    /// giving the graph of `diag(factors) * M`.
    pub fn scale_rows(&self, factors: &[R]) -> Result<Self> {
        if factors.len() != self.n {
            return Err(Error::Dimension("one factor per vertex expected".into()));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = e.weight.mul(&factors[e.source]);
        }
        for (d, f) in g.diagonal.iter_mut().zip(factors) {
            *d = d.mul(f);
        }
        Ok(g)
    }

    /// True when every row of the full weight matrix sums to one.
    pub fn rows_sum_to_one(&self) -> bool {
        (0..self.n).all(|v| self.out_weight(v).add(&self.diagonal[v]).is_one())
    }

    fn reach(&self, start: usize, within: &[bool], forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let adj = if forward { &self.out_adj[u] } else { &self.in_adj[u] };
            for &k in adj {
                let e = &self.edges[k];
                let x = if forward { e.target } else { e.source };
                if within[x] && !seen[x] {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        seen
    }

    /// Vertices of the strongly connected component of `start` in the
    /// subgraph induced on `within`.
    pub fn component_within(&self, start: usize, within: &[bool]) -> Vec<bool> {
        let fwd = self.reach(start, within, true);
        let bwd = self.reach(start, within, false);
        fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect()
    }

    pub fn is_strongly_connected(&self) -> bool {
        let all = vec![true; self.n];
        self.component_within(0, &all).iter().all(|&x| x)
    }

    /// Whether the subgraph induced on the nonempty set `w` is strongly
    /// connected. Singletons are.
    pub fn is_strongly_connected_set(&self, w: VertexSet) -> bool {
        let Some(start) = w.min() else {
            return false;
        };
        let within: Vec<bool> = (0..self.n).map(|v| w.contains(v)).collect();
        let comp = self.component_within(start, &within);
        w.iter().all(|v| comp[v])
    }

    /// Subgraph induced on `w`, relabelled `0..|w|` in increasing order of
    /// the original labels. Returns the graph and the original labels.
    pub fn induced_subgraph(&self, w: VertexSet) -> Result<(Digraph<R>, Vec<usize>)> {
        if w.is_empty() {
            return Err(Error::InvalidGraph("induced subgraph on the empty set".into()));
        }
        let keep = w.to_vec();
        let new_index = |v: usize| keep.iter().position(|&x| x == v);
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    source: new_index(e.source)?,
                    target: new_index(e.target)?,
                    weight: e.weight.clone(),
                })
            })
            .collect();
        let diagonal = keep.iter().map(|&v| self.diagonal[v].clone()).collect();
        Ok((Digraph::new(keep.len(), edges, Some(diagonal))?, keep))
    }

    /// Every nonempty `W` whose induced subgraph is strongly connected,
    /// larger sets first, then lexicographic.
    pub fn strongly_connected_subsets(&self) -> Result<Vec<VertexSet>> {
        if self.n > MAX_SUBSET_ENUMERATION {
            return Err(Error::CapExceeded {
                what: "vertex count for subset enumeration",
                size: self.n as u128,
                cap: MAX_SUBSET_ENUMERATION as u128,
            });
        }
        let mut sets: Vec<VertexSet> = (1..1u64 << self.n)
            .map(VertexSet::from_bits)
            .filter(|&w| self.is_strongly_connected_set(w))
            .collect();
        sets.sort_by(VertexSet::canonical_cmp);
        Ok(sets)
    }

    pub fn require_strongly_connected(&self) -> Result<()> {
        if self.is_strongly_connected() {
            Ok(())
        } else {
            Err(Error::NotStronglyConnected)
        }
    }

    pub(crate) fn require_set_sized(&self) -> Result<()> {
        if self.n > MAX_SET_VERTICES {
            return Err(Error::CapExceeded {
                what: "vertex count for set-based operations",
                size: self.n as u128,
                cap: MAX_SET_VERTICES as u128,
            });
        }
        Ok(())
    }
}

/// Largest vertex count accepted by [`strongly_connected_edge_sets`].
pub const MAX_FAMILY_VERTICES: usize = 5;

/// Edge sets of every strongly connected simple digraph on the labelled
/// vertices `0..n`, ordered by the bitmask of the chosen ordered pairs.
pub fn strongly_connected_edge_sets(n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n == 0 || n > MAX_FAMILY_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count for digraph families",
            size: n as u128,
            cap: MAX_FAMILY_VERTICES as u128,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut family = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .collect();
        let g = Digraph::from_triples(n, chosen.iter().map(|&(u, v)| (u, v, Rational::one())).collect())?;
        if g.is_strongly_connected() {
            family.push(chosen);
        }
    }
    Ok(family)
}

impl Digraph<MultiPoly> {
    /// Substitute rational values for every variable.
    pub fn evaluate(&self, values: &[Rational]) -> Result<Digraph<Rational>> {
        self.try_map_weights(|p| p.evaluate(values))
    }
}

impl Digraph<Rational> {
    /// Row-stochastic: weights and diagonal are nonnegative, every edge weight
    /// is positive, and rows sum to one.
    pub fn is_row_stochastic(&self) -> bool {
        use num_traits::Signed;
        self.edges.iter().all(|e| e.weight.is_positive())
            && self.diagonal.iter().all(|d| !d.is_negative())
            && self.rows_sum_to_one()
    }

    pub fn to_symbolic(&self) -> Digraph<MultiPoly> {
        self.map_weights(|q| MultiPoly::constant(q.clone()))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::algebra::{rational, VarRegistry};

    pub fn unit(n: usize, pairs: &[(usize, usize)]) -> Digraph<Rational> {
        Digraph::from_triples(n, pairs.iter().map(|&(u, v)| (u, v, rational(1, 1))).collect())
            .unwrap()
    }

    pub fn cycle3() -> Digraph<Rational> {
        unit(3, &[(0, 1), (1, 2), (2, 0)])
    }

    pub fn k3() -> Digraph<Rational> {
        unit(3, &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
    }

    pub fn uniform_k3() -> Digraph<Rational> {
        k3().map_weights(|_| rational(1, 2))
            .with_diagonal(vec![rational(0, 1); 3])
            .unwrap()
    }

    pub fn two_cycle() -> Digraph<Rational> {
        unit(2, &[(0, 1), (1, 0)])
    }

    /// Every edge weight replaced by its own variable `x_u_v`.
    pub fn symbolic(g: &Digraph<Rational>) -> (Digraph<MultiPoly>, VarRegistry) {
        let mut reg = VarRegistry::new();
        let edges = g
            .edges()
            .iter()
            .map(|e| Edge {
                source: e.source,
                target: e.target,
                weight: reg.var(&alloc::format!("x_{}_{}", e.source, e.target)),
            })
            .collect();
        (Digraph::new(g.vertex_count(), edges, None).unwrap(), reg)
    }
}
