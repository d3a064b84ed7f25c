//! Rooted spanning trees and forests, and the Laplacian minors that count
//! them.
//!
//! Edges of a tree or forest point toward the roots: every non-root vertex
//! keeps exactly one of its outgoing edges.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Ring, RingMatrix};
use crate::graph::{Digraph, VertexSet};
use crate::{Error, Result};

/// Out-map of a forest: `out[v]` is the head of the edge leaving `v`, or
/// `None` when `v` is a root.
pub type OutMap = [Option<usize>];

/// Spanning forest rooted at a nonempty vertex set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    out: Vec<Option<usize>>,
}

/// Spanning tree with all edges directed toward `root`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arborescence {
    root: usize,
    out: Vec<Option<usize>>,
}

fn validate_out_map<R: Ring>(g: &Digraph<R>, out: &OutMap) -> Result<()> {
    let n = g.vertex_count();
    if out.len() != n {
        return Err(Error::InvalidTree(format!("out-map has {} slots, graph has {n} vertices", out.len())));
    }
    for (v, t) in out.iter().enumerate() {
        if let Some(t) = *t {
            if g.edge_index(v, t).is_none() {
                return Err(Error::InvalidTree(format!("{v} -> {t} is not an edge")));
            }
        }
    }
    // every chain must end at a root; a chain longer than n has a cycle
    for start in 0..n {
        let mut x = start;
        let mut steps = 0;
        while let Some(next) = out[x] {
            x = next;
            steps += 1;
            if steps > n {
                return Err(Error::InvalidTree(format!("cycle through {start}")));
            }
        }
    }
    Ok(())
}

impl Forest {
    pub fn new<R: Ring>(g: &Digraph<R>, out: Vec<Option<usize>>) -> Result<Self> {
        validate_out_map(g, &out)?;
        if out.iter().all(Option::is_some) {
            return Err(Error::InvalidTree("forest has no root".into()));
        }
        Ok(Forest { out })
    }

    pub fn out(&self) -> &OutMap {
        &self.out
    }

    pub fn roots(&self) -> VertexSet {
        self.out
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_none())
            .map(|(v, _)| v)
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| (v, t)))
    }

    pub fn contains_edge(&self, source: usize, target: usize) -> bool {
        self.out.get(source) == Some(&Some(target))
    }

    pub fn weight<R: Ring>(&self, g: &Digraph<R>) -> R {
        out_map_weight(g, &self.out)
    }

    /// Same text encoding as [`Arborescence::encoding`].
    pub fn encoding(&self) -> String {
        encode(&self.out)
    }

    pub fn into_tree(self) -> Option<Arborescence> {
        let roots = self.roots();
        (roots.len() == 1).then(|| Arborescence {
            root: roots.min().unwrap_or(0),
            out: self.out,
        })
    }
}

impl Arborescence {
    pub fn new<R: Ring>(g: &Digraph<R>, out: Vec<Option<usize>>) -> Result<Self> {
        validate_out_map(g, &out)?;
        let roots: Vec<usize> = (0..out.len()).filter(|&v| out[v].is_none()).collect();
        match roots.as_slice() {
            [root] => Ok(Arborescence { root: *root, out }),
            _ => Err(Error::InvalidTree(format!("{} roots", roots.len()))),
        }
    }

    /// Caller guarantees validity.
    pub(crate) fn from_parts(root: usize, out: Vec<Option<usize>>) -> Self {
        Arborescence { root, out }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn out(&self) -> &OutMap {
        &self.out
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.out[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| (v, t)))
    }

    pub fn contains_edge(&self, source: usize, target: usize) -> bool {
        self.out.get(source) == Some(&Some(target))
    }

    pub fn weight<R: Ring>(&self, g: &Digraph<R>) -> R {
        out_map_weight(g, &self.out)
    }

    pub fn as_forest(&self) -> Forest {
        Forest {
            out: self.out.clone(),
        }
    }

    /// Canonical text encoding: the sorted `vertex>parent` pairs.
    pub fn encoding(&self) -> String {
        encode(&self.out)
    }
}

fn encode(out: &OutMap) -> String {
    let parts: Vec<String> = out
        .iter()
        .enumerate()
        .filter_map(|(v, t)| t.map(|t| format!("{v}>{t}")))
        .collect();
    if parts.is_empty() {
        String::from("-")
    } else {
        parts.join(",")
    }
}

impl fmt::Display for Arborescence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root {} [{}]", self.root, self.encoding())
    }
}

/// Product of the weights of the edges in an out-map.
pub fn out_map_weight<R: Ring>(g: &Digraph<R>, out: &OutMap) -> R {
    out.iter()
        .enumerate()
        .filter_map(|(v, t)| t.map(|t| g.weight(v, t).expect("forest edges belong to the graph")))
        .fold(R::one(), |acc, w| acc.mul(w))
}

fn closes_cycle(out: &OutMap, from: usize, to: usize) -> bool {
    let mut x = to;
    loop {
        if x == from {
            return true;
        }
        match out[x] {
            Some(next) => x = next,
            None => return false,
        }
    }
}

/// Visit every spanning forest whose roots are exactly the vertices with
/// `is_root[v]`, in lexicographic order of the out-map.
pub fn for_each_forest<R: Ring>(g: &Digraph<R>, is_root: &[bool], mut visit: impl FnMut(&OutMap)) {
    let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| !is_root[v]).collect();
    let mut out = vec![None; g.vertex_count()];
    if is_root.iter().any(|&r| r) {
        backtrack(g, &free, 0, &mut out, &mut visit);
    }
}

fn backtrack<R: Ring>(
    g: &Digraph<R>,
    free: &[usize],
    depth: usize,
    out: &mut Vec<Option<usize>>,
    visit: &mut impl FnMut(&OutMap),
) {
    let Some(&v) = free.get(depth) else {
        visit(out);
        return;
    };
    for &k in g.out_edges(v) {
        let u = g.edge(k).target;
        if closes_cycle(out, v, u) {
            continue;
        }
        out[v] = Some(u);
        backtrack(g, free, depth + 1, out, visit);
        out[v] = None;
    }
}

fn root_mask(n: usize, w: VertexSet) -> Result<Vec<bool>> {
    if w.is_empty() {
        return Err(Error::Precondition("root set must be nonempty".into()));
    }
    if w.iter().any(|v| v >= n) {
        return Err(Error::Precondition(format!("root set {w} exceeds the vertex range")));
    }
    Ok((0..n).map(|v| w.contains(v)).collect())
}

/// All spanning trees rooted at `root`, lexicographic on the out-map.
pub fn enumerate_trees<R: Ring>(g: &Digraph<R>, root: usize) -> Vec<Arborescence> {
    let mut is_root = vec![false; g.vertex_count()];
    is_root[root] = true;
    let mut trees = Vec::new();
    for_each_forest(g, &is_root, |out| trees.push(Arborescence::from_parts(root, out.to_vec())));
    trees
}

/// All spanning forests rooted at `w`, lexicographic on the out-map.
pub fn enumerate_forests<R: Ring>(g: &Digraph<R>, w: VertexSet) -> Result<Vec<Forest>> {
    let is_root = root_mask(g.vertex_count(), w)?;
    let mut forests = Vec::new();
    for_each_forest(g, &is_root, |out| forests.push(Forest { out: out.to_vec() }));
    Ok(forests)
}

/// Number of spanning forests rooted at `w`.
pub fn k_count<R: Ring>(g: &Digraph<R>, w: VertexSet) -> Result<u64> {
    let is_root = root_mask(g.vertex_count(), w)?;
    let mut count = 0u64;
    for_each_forest(g, &is_root, |_| count += 1);
    Ok(count)
}

/// Sum of the weights of the spanning forests rooted at `roots`.
pub fn psi_sum<R: Ring>(g: &Digraph<R>, roots: VertexSet) -> Result<R> {
    let is_root = root_mask(g.vertex_count(), roots)?;
    let mut total = R::zero();
    for_each_forest(g, &is_root, |out| total = total.add(&out_map_weight(g, out)));
    Ok(total)
}

/// Sum of the weights of all rooted spanning trees, over every root.
pub fn tau<R: Ring>(g: &Digraph<R>) -> R {
    let n = g.vertex_count();
    let mut total = R::zero();
    for root in 0..n {
        let mut is_root = vec![false; n];
        is_root[root] = true;
        for_each_forest(g, &is_root, |out| total = total.add(&out_map_weight(g, out)));
    }
    total
}

/// Laplacian of the edge weights: `L[i][j] = -w(i,j)` off the diagonal and
/// `L[i][i] = sum_k w(i,k)`. The graph's own diagonal is ignored, so every
/// row sums to zero.
pub fn laplacian<R: Ring>(g: &Digraph<R>) -> RingMatrix<R> {
    let mut m = RingMatrix::zeros(g.vertex_count());
    for e in g.edges() {
        m.set(e.source, e.target, e.weight.neg());
    }
    for v in 0..g.vertex_count() {
        m.set(v, v, g.out_weight(v));
    }
    m
}

/// Determinant of the Laplacian with the rows and columns of `w` removed,
/// checked against the enumerated weight of forests rooted at `w`.
pub fn matrix_forest_check<R: Ring>(g: &Digraph<R>, w: VertexSet) -> Result<R> {
    let minor = laplacian(g).minor(&w.to_vec())?;
    let det = minor.det();
    let forests = psi_sum(g, w)?;
    if det != forests {
        return Err(Error::violation(
            "matrix-forest",
            format!("W = {w}: det = {det}, forest sum = {forests}"),
        ));
    }
    Ok(det)
}

/// [`matrix_forest_check`] for every singleton root; returns the per-root
/// minors.
pub fn matrix_tree_check<R: Ring>(g: &Digraph<R>) -> Result<Vec<R>> {
    (0..g.vertex_count())
        .map(|v| matrix_forest_check(g, VertexSet::singleton(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, MultiPoly, Rational};
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    /// Independent oracle: try every choice of one out-edge per non-root
    /// vertex and keep the acyclic ones.
    fn brute_force_forests(g: &Digraph<Rational>, w: VertexSet) -> Vec<Vec<Option<usize>>> {
        let n = g.vertex_count();
        let free: Vec<usize> = (0..n).filter(|&v| !w.contains(v)).collect();
        let choices: Vec<Vec<usize>> = free.iter().map(|&v| g.out_neighbors(v).collect()).collect();
        let mut result = Vec::new();
        let total: usize = choices.iter().map(Vec::len).product();
        for mut code in 0..total {
            let mut out = vec![None; n];
            for (i, &v) in free.iter().enumerate() {
                let c = &choices[i];
                out[v] = Some(c[code % c.len()]);
                code /= c.len();
            }
            if validate_out_map(g, &out).is_ok() {
                result.push(out);
            }
        }
        result.sort();
        result
    }

    #[test]
    fn trees_of_small_graphs() {
        let c3 = enumerate_trees(&cycle3(), 0);
        assert_eq!(c3.len(), 1);
        assert_eq!(c3[0].out(), &[None, Some(2), Some(0)]);
        assert_eq!(enumerate_trees(&k3(), 0).len(), 3);
        let two = enumerate_trees(&two_cycle(), 0);
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].encoding(), "1>0");
    }

    #[test]
    fn forests_of_small_graphs() {
        let w01 = VertexSet::from_iter([0, 1]);
        assert_eq!(enumerate_forests(&k3(), w01).unwrap().len(), 2);
        assert_eq!(enumerate_forests(&cycle3(), w01).unwrap().len(), 1);
        let all = enumerate_forests(&k3(), VertexSet::full(3)).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].out().iter().all(Option::is_none));
        assert!(enumerate_forests(&k3(), VertexSet::empty()).is_err());
    }

    #[test]
    fn counts_for_k3() {
        let g = k3();
        assert_eq!(tau(&g), rational(9, 1));
        assert_eq!(k_count(&g, VertexSet::from_iter([0, 1])).unwrap(), 2);
        assert_eq!(k_count(&g, VertexSet::singleton(0)).unwrap(), 3);
        assert_eq!(k_count(&g, VertexSet::full(3)).unwrap(), 1);
        assert_eq!(psi_sum(&g, VertexSet::full(3)).unwrap(), rational(1, 1));
    }

    #[test]
    fn symbolic_three_cycle_tau() {
        let (g, mut reg) = symbolic(&cycle3());
        let a = reg.var("x_0_1");
        let b = reg.var("x_1_2");
        let c = reg.var("x_2_0");
        assert_eq!(tau(&g), a.mul(&b).add(&b.mul(&c)).add(&c.mul(&a)));
        assert_eq!(matrix_forest_check(&g, VertexSet::singleton(0)).unwrap(), b.mul(&c));
    }

    #[test]
    fn laplacian_examples() {
        let (g, mut reg) = symbolic(&two_cycle());
        let a = reg.var("x_0_1");
        let b = reg.var("x_1_0");
        let expect = RingMatrix::from_rows(vec![vec![a.clone(), a.neg()], vec![b.neg(), b.clone()]]).unwrap();
        assert_eq!(laplacian(&g), expect);
        let p = uniform_k3();
        let i_minus_p = RingMatrix::identity(3).sub(&p.weight_matrix()).unwrap();
        assert_eq!(laplacian(&p), i_minus_p);
        assert!(laplacian(&g).row_sums().iter().all(MultiPoly::is_zero));
    }

    #[test]
    fn matrix_forest_examples() {
        assert_eq!(matrix_forest_check(&k3(), VertexSet::singleton(0)).unwrap(), rational(3, 1));
        assert_eq!(matrix_forest_check(&k3(), VertexSet::full(3)).unwrap(), rational(1, 1));
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let g = k3();
        assert!(Arborescence::new(&g, vec![None, Some(2), Some(1)]).is_err());
        assert!(Arborescence::new(&g, vec![None, None, Some(1)]).is_err());
        assert!(Arborescence::new(&cycle3(), vec![None, Some(0), Some(0)]).is_err());
        assert!(Forest::new(&g, vec![Some(1), Some(0), Some(0)]).is_err());
        assert_eq!(Arborescence::new(&g, vec![None, Some(0), Some(1)]).unwrap().root(), 0);
    }

    fn random_graph() -> impl Strategy<Value = Digraph<Rational>> {
        (1usize..=4).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            let m = pairs.len();
            proptest::collection::vec(proptest::option::weighted(0.7, (1i64..20, 1i64..20)), m)
                .prop_map(move |ws| {
                    let triples = pairs
                        .iter()
                        .zip(ws)
                        .filter_map(|(&(u, v), w)| w.map(|(a, b)| (u, v, rational(a, b))))
                        .collect();
                    Digraph::from_triples(n, triples).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn enumeration_matches_brute_force(g in random_graph(), bits in 1u64..16) {
            let n = g.vertex_count();
            let w = VertexSet::from_bits(bits).intersection(VertexSet::full(n));
            prop_assume!(!w.is_empty());
            let listed: Vec<Vec<Option<usize>>> =
                enumerate_forests(&g, w).unwrap().into_iter().map(|f| f.out().to_vec()).collect();
            prop_assert_eq!(&listed, &brute_force_forests(&g, w));
            for f in enumerate_forests(&g, w).unwrap() {
                prop_assert_eq!(f.roots(), w);
            }
        }

        #[test]
        fn trees_are_singleton_forests(g in random_graph()) {
            for v in 0..g.vertex_count() {
                let trees: Vec<Forest> = enumerate_trees(&g, v).iter().map(Arborescence::as_forest).collect();
                prop_assert_eq!(trees, enumerate_forests(&g, VertexSet::singleton(v)).unwrap());
            }
        }

        #[test]
        fn minors_count_forests(g in random_graph()) {
            let n = g.vertex_count();
            for bits in 1..1u64 << n {
                prop_assert!(matrix_forest_check(&g, VertexSet::from_bits(bits)).is_ok());
            }
            let per_root = matrix_tree_check(&g).unwrap();
            prop_assert_eq!(Rational::sum(&per_root), tau(&g));
            if g.is_strongly_connected() {
                prop_assert_eq!(k_count(&g, VertexSet::full(n)).unwrap(), 1);
                for v in 0..n {
                    prop_assert!(k_count(&g, VertexSet::singleton(v)).unwrap() >= 1);
                }
            }
        }
    }
}
