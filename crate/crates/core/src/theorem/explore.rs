use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::MPrimeTable;
use crate::algebra::Ring;
use crate::arborescence::{enumerate_forests, enumerate_trees, Arborescence, Forest};
use crate::graph::{Digraph, VertexSet};
use crate::{Error, Result};

/// Total order on the edges of a graph, as a list of edge indices from
/// first to last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrdering {
    order: Vec<usize>,
}

impl EdgeOrdering {
    /// Edges by `(source, target)`, which is the graph's own edge order.
    pub fn lexicographic(edge_count: usize) -> Self {
        EdgeOrdering {
            order: (0..edge_count).collect(),
        }
    }

    pub fn from_permutation(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &k in &order {
            if k >= order.len() || seen[k] {
                return Err(Error::InvalidOrdering(format!("{order:?} is not a permutation")));
            }
            seen[k] = true;
        }
        Ok(EdgeOrdering { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Incoming edges of each vertex, earliest in this ordering first.
    fn incoming<R: Ring>(&self, g: &Digraph<R>) -> Result<Vec<Vec<usize>>> {
        if self.order.len() != g.edges().len() {
            return Err(Error::InvalidOrdering(format!(
                "ordering has {} edges, graph has {}",
                self.order.len(),
                g.edges().len()
            )));
        }
        let mut incoming = vec![Vec::new(); g.vertex_count()];
        for &k in &self.order {
            incoming[g.edge(k).target].push(k);
        }
        Ok(incoming)
    }
}

fn require_tree_of<R: Ring>(g: &Digraph<R>, t: &Arborescence) -> Result<()> {
    if t.out().len() != g.vertex_count() {
        return Err(Error::InvalidTree(format!("{t} has the wrong vertex count")));
    }
    Arborescence::new(g, t.out().to_vec()).map(|_| ())
}

fn psi_with<R: Ring>(g: &Digraph<R>, t: &Arborescence, incoming: &[Vec<usize>]) -> VertexSet {
    let n = g.vertex_count();
    let w = t.root();
    let mut visited = vec![false; n];
    let mut deleted = vec![false; n];
    visited[w] = true;
    let mut queue = VecDeque::from([w]);
    while let Some(u) = queue.pop_front() {
        for &k in &incoming[u] {
            let x = g.edge(k).source;
            if visited[x] || deleted[x] {
                continue;
            }
            if t.parent(x) == Some(u) {
                visited[x] = true;
                queue.push_back(x);
            } else {
                deleted[x] = true;
            }
        }
    }
    let alive: Vec<bool> = deleted.iter().map(|d| !d).collect();
    g.component_within(w, &alive)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(v, _)| v)
        .collect()
}

/// Run the exploration algorithm on `t`: a breadth-first traversal from the
/// root along incoming edges, deleting every vertex first reached by an edge
/// outside `t`. Returns the strongly connected component of the root among
/// the surviving vertices.
pub fn exploration_psi<R: Ring>(
    g: &Digraph<R>,
    t: &Arborescence,
    ord: &EdgeOrdering,
) -> Result<VertexSet> {
    require_tree_of(g, t)?;
    g.require_set_sized()?;
    Ok(psi_with(g, t, &ord.incoming(g)?))
}

/// The unique tree rooted at `w` that contains `f` and whose exploration
/// keeps every root of `f`.
pub fn canonical_tree<R: Ring>(
    g: &Digraph<R>,
    f: &Forest,
    w: usize,
    ord: &EdgeOrdering,
) -> Result<Arborescence> {
    let roots = f.roots();
    if !roots.contains(w) {
        return Err(Error::Precondition(format!("{w} is not a root of the forest")));
    }
    Forest::new(g, f.out().to_vec())?;
    Ok(canonical_with(g, f, w, &ord.incoming(g)?))
}

fn canonical_with<R: Ring>(g: &Digraph<R>, f: &Forest, w: usize, incoming: &[Vec<usize>]) -> Arborescence {
    let n = g.vertex_count();
    let roots = f.roots();
    let mut out = f.out().to_vec();
    let mut visited = vec![false; n];
    let mut deleted = vec![false; n];
    visited[w] = true;
    let mut queue = VecDeque::from([w]);
    while let Some(u) = queue.pop_front() {
        for &k in &incoming[u] {
            let x = g.edge(k).source;
            if visited[x] || deleted[x] {
                continue;
            }
            if roots.contains(x) {
                out[x] = Some(u);
                visited[x] = true;
                queue.push_back(x);
            } else if f.out()[x] == Some(u) {
                visited[x] = true;
                queue.push_back(x);
            } else {
                deleted[x] = true;
            }
        }
    }
    // every root of f is reached inside the strongly connected root set, so
    // only w is left without an out-edge
    Arborescence::from_parts(w, out)
}

/// How many trees rooted at `w` explore to each strongly connected set.
pub fn psi_distribution<R: Ring>(
    g: &Digraph<R>,
    w: usize,
    ord: &EdgeOrdering,
) -> Result<BTreeMap<VertexSet, u64>> {
    g.require_set_sized()?;
    let incoming = ord.incoming(g)?;
    let mut dist = BTreeMap::new();
    for t in enumerate_trees(g, w) {
        *dist.entry(psi_with(g, &t, &incoming)).or_insert(0) += 1;
    }
    Ok(dist)
}

fn require_member(w_set: VertexSet, w: usize) -> Result<()> {
    if w_set.contains(w) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{w} is not in {w_set}")))
    }
}

/// Number of trees rooted at `w` with `psi(t) = W`.
pub fn m_count<R: Ring>(g: &Digraph<R>, w_set: VertexSet, w: usize, ord: &EdgeOrdering) -> Result<u64> {
    require_member(w_set, w)?;
    Ok(psi_distribution(g, w, ord)?.get(&w_set).copied().unwrap_or(0))
}

/// Number of trees rooted at `w` with `W ⊆ psi(t)`.
pub fn count_psi_superset<R: Ring>(
    g: &Digraph<R>,
    w_set: VertexSet,
    w: usize,
    ord: &EdgeOrdering,
) -> Result<u64> {
    require_member(w_set, w)?;
    Ok(psi_distribution(g, w, ord)?
        .iter()
        .filter(|(psi, _)| w_set.is_subset(**psi))
        .map(|(_, c)| c)
        .sum())
}

/// Tallies from one run of [`exploration_check`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExplorationSummary {
    pub trees: u64,
    pub pairs: u64,
    pub canonical_trees: u64,
}

/// For one edge ordering and every root `w`: the exploration sets partition
/// the trees rooted at `w`, `m(W, w) = m'(W)` and the number of trees with
/// `W ⊆ psi(t)` is `k(W)` for every strongly connected `W` containing `w`,
/// and the canonical trees of the forests rooted at `W` are distinct and
/// keep `W`.
pub fn exploration_check<R: Ring>(
    g: &Digraph<R>,
    table: &MPrimeTable,
    ord: &EdgeOrdering,
) -> Result<ExplorationSummary> {
    g.require_set_sized()?;
    let incoming = ord.incoming(g)?;
    let mut summary = ExplorationSummary::default();
    for w in 0..g.vertex_count() {
        let trees = enumerate_trees(g, w);
        let mut dist: BTreeMap<VertexSet, u64> = BTreeMap::new();
        for t in &trees {
            *dist.entry(psi_with(g, t, &incoming)).or_insert(0) += 1;
        }
        summary.trees += trees.len() as u64;
        for psi in dist.keys() {
            if !psi.contains(w) || table.m_prime(*psi).is_none() {
                return Err(Error::violation(
                    "exploration",
                    format!("root {w}: exploration returned {psi}, not a strongly connected set containing the root"),
                ));
            }
        }
        for (w_set, k, m) in table.entries().iter().filter(|e| e.0.contains(w)) {
            let count = dist.get(w_set).copied().unwrap_or(0);
            if count as i64 != *m {
                return Err(Error::violation(
                    "exploration-count",
                    format!("W = {w_set}, root {w}, order {:?}: {count} trees, m' = {m}", ord.order()),
                ));
            }
            let superset: u64 = dist.iter().filter(|(p, _)| w_set.is_subset(**p)).map(|(_, c)| c).sum();
            if superset != *k {
                return Err(Error::violation(
                    "exploration-superset",
                    format!("W = {w_set}, root {w}: {superset} trees keep W, k(W) = {k}"),
                ));
            }
            let mut images = BTreeSet::new();
            for f in enumerate_forests(g, *w_set)? {
                let t = canonical_with(g, &f, w, &incoming);
                let valid = Arborescence::new(g, t.out().to_vec()).is_ok()
                    && f.edges().all(|(a, b)| t.contains_edge(a, b));
                if !valid || !w_set.is_subset(psi_with(g, &t, &incoming)) {
                    return Err(Error::violation(
                        "canonical-tree",
                        format!("W = {w_set}, root {w}: forest [{}] gives {t}", f.encoding()),
                    ));
                }
                if !images.insert(t.out().to_vec()) {
                    return Err(Error::violation(
                        "canonical-tree",
                        format!("W = {w_set}, root {w}: {t} reached from two forests"),
                    ));
                }
                summary.canonical_trees += 1;
            }
            summary.pairs += 1;
        }
        let total: u64 = dist.values().sum();
        if total != trees.len() as u64 {
            return Err(Error::violation("exploration-partition", format!("root {w}")));
        }
    }
    Ok(summary)
}
