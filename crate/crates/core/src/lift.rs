//! The spanning tree graph: one vertex per rooted spanning tree, and an edge
//! `t_i -> t_j` of weight `w(i, j)` whenever `t_j` is `t_i` with the edge
//! `(i, j)` added and the edge leaving `j` removed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::algebra::{modular, Ring, RingMatrix};
use crate::arborescence::{enumerate_trees, k_count, laplacian, Arborescence};
use crate::graph::{Digraph, Edge, VertexSet};
use crate::{Error, Result};

pub const DEFAULT_LIFT_CAP: usize = 100_000;

/// Lifted graph together with the tree behind each of its vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftGraph<R> {
    graph: Digraph<R>,
    trees: Vec<Arborescence>,
    index: BTreeMap<Vec<Option<usize>>, usize>,
}

impl<R: Ring> LiftGraph<R> {
    pub fn graph(&self) -> &Digraph<R> {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[Arborescence] {
        &self.trees
    }

    pub fn tree(&self, t: usize) -> &Arborescence {
        &self.trees[t]
    }

    pub fn root_of(&self, t: usize) -> usize {
        self.trees[t].root()
    }

    /// Lift vertex carrying the tree with this out-map.
    pub fn index_of(&self, out: &[Option<usize>]) -> Option<usize> {
        self.index.get(out).copied()
    }

    /// Lift vertices whose tree is rooted at `v`.
    pub fn vertices_rooted_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.trees.len()).filter(move |&t| self.trees[t].root() == v)
    }

    /// Spread per-vertex values of the base graph to the lift: lift vertex
    /// `t` receives the value of its root.
    pub fn lift_values(&self, values: &[R]) -> Vec<R> {
        self.trees.iter().map(|t| values[t.root()].clone()).collect()
    }

    /// Same lift structure with weights taken from another weighting of the
    /// base graph. `g` must have the same edge set as the original.
    pub fn reweight<S: Ring>(&self, g: &Digraph<S>) -> Result<LiftGraph<S>> {
        let edges = self
            .graph
            .edges()
            .iter()
            .map(|e| {
                let (i, j) = (self.root_of(e.source), self.root_of(e.target));
                let weight = g
                    .weight(i, j)
                    .ok_or_else(|| Error::InvalidGraph(format!("edge {i} -> {j} missing from reweighting")))?
                    .clone();
                Ok(Edge {
                    source: e.source,
                    target: e.target,
                    weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let diagonal = self.trees.iter().map(|t| g.diagonal()[t.root()].clone()).collect();
        Ok(LiftGraph {
            graph: Digraph::new(self.trees.len(), edges, Some(diagonal))?,
            trees: self.trees.clone(),
            index: self.index.clone(),
        })
    }
}

/// Out-map of the tree reached from `t` (rooted at `i`) along base edge
/// `(i, j)`: add `i -> j`, drop the edge leaving `j`.
pub fn swap_root(t: &Arborescence, j: usize) -> Vec<Option<usize>> {
    let mut out = t.out().to_vec();
    out[t.root()] = Some(j);
    out[j] = None;
    out
}

/// Number of lift vertices, from the matrix-tree theorem on unit weights.
pub fn predicted_lift_size<R: Ring>(g: &Digraph<R>) -> num_bigint::BigInt {
    let adjacency: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| g.out_neighbors(v).collect())
        .collect();
    modular::count_rooted_trees(&adjacency)
}

/// Build the spanning tree graph. Refuses graphs whose lift would have more
/// than `cap` vertices before enumerating anything.
pub fn build_lift<R: Ring>(g: &Digraph<R>, cap: usize) -> Result<LiftGraph<R>> {
    g.require_strongly_connected()?;
    let predicted = predicted_lift_size(g);
    let size = predicted.to_u128().unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::CapExceeded {
            what: "predicted lift vertex count",
            size,
            cap: cap as u128,
        });
    }
    let trees: Vec<Arborescence> = (0..g.vertex_count())
        .flat_map(|root| enumerate_trees(g, root))
        .collect();
    let index: BTreeMap<Vec<Option<usize>>, usize> = trees
        .iter()
        .enumerate()
        .map(|(k, t)| (t.out().to_vec(), k))
        .collect();
    let mut edges = Vec::new();
    for (k, t) in trees.iter().enumerate() {
        let i = t.root();
        for &e in g.out_edges(i) {
            let j = g.edge(e).target;
            let target = *index.get(&swap_root(t, j)).ok_or_else(|| {
                Error::violation("lift-construction", format!("swapping {t} along {i} -> {j} is not a tree"))
            })?;
            if target == k {
                return Err(Error::violation("lift-construction", format!("self-loop at {t}")));
            }
            edges.push(Edge {
                source: k,
                target,
                weight: g.edge(e).weight.clone(),
            });
        }
    }
    let diagonal = trees.iter().map(|t| g.diagonal()[t.root()].clone()).collect();
    // Digraph::new rejects parallel edges, which would break simplicity
    let graph = Digraph::new(trees.len(), edges, Some(diagonal))?;
    Ok(LiftGraph {
        graph,
        trees,
        index,
    })
}

/// Full weight matrix of the lift (edge weights plus lifted diagonal).
pub fn lift_matrix<R: Ring>(lift: &LiftGraph<R>) -> RingMatrix<R> {
    lift.graph.weight_matrix()
}

/// `H = Q + Y`: Laplacian of the edge weights plus the vertex weights.
pub fn schrodinger_matrix<R: Ring>(g: &Digraph<R>, y: &[R]) -> Result<RingMatrix<R>> {
    if y.len() != g.vertex_count() {
        return Err(Error::Dimension("one vertex weight per vertex expected".into()));
    }
    laplacian(g).add(&RingMatrix::diagonal(y))
}

/// Lifted Schrodinger matrix: the lift's Laplacian (zero row sums) plus
/// the vertex weight of each lift vertex's root on the diagonal.
pub fn lift_schrodinger<R: Ring>(lift: &LiftGraph<R>, y: &[R]) -> Result<RingMatrix<R>> {
    let base = lift.trees.first().map_or(0, |t| t.out().len());
    if y.len() != base {
        return Err(Error::Dimension("one vertex weight per base vertex expected".into()));
    }
    schrodinger_matrix(&lift.graph, &lift.lift_values(y))
}

/// One based closed walk of the base graph and how many closed walks of the
/// lift project onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkLift {
    pub walk: Vec<usize>,
    pub support: VertexSet,
    pub lifts: u64,
    pub forests: u64,
}

fn for_each_closed_walk<R: Ring>(g: &Digraph<R>, max_len: usize, mut visit: impl FnMut(&[usize])) {
    let n = g.vertex_count();
    let steps: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut s: Vec<usize> = g.out_neighbors(v).collect();
            if !g.diagonal()[v].is_zero() {
                s.push(v);
            }
            s.sort_unstable();
            s
        })
        .collect();
    fn extend(
        steps: &[Vec<usize>],
        walk: &mut Vec<usize>,
        max_len: usize,
        visit: &mut impl FnMut(&[usize]),
    ) {
        let last = *walk.last().expect("walk has a start");
        if steps[last].contains(&walk[0]) {
            visit(walk);
        }
        if walk.len() == max_len {
            return;
        }
        for &u in &steps[last] {
            walk.push(u);
            extend(steps, walk, max_len, visit);
            walk.pop();
        }
    }
    for start in 0..n {
        let mut walk = vec![start];
        extend(&steps, &mut walk, max_len, &mut visit);
    }
}

fn count_lifts_of<R: Ring>(lift: &LiftGraph<R>, walk: &[usize]) -> u64 {
    let len = walk.len();
    let lg = lift.graph();
    let mut count = 0;
    for start in lift.vertices_rooted_at(walk[0]) {
        // lift walks are deterministic per start, but follow every matching
        // edge rather than assume it
        let mut frontier = vec![start];
        for pos in 0..len {
            let next_root = walk[(pos + 1) % len];
            let mut next = Vec::new();
            for &t in &frontier {
                if next_root == lift.root_of(t) {
                    if !lg.diagonal()[t].is_zero() {
                        next.push(t);
                    }
                } else {
                    next.extend(
                        lg.out_edges(t)
                            .iter()
                            .map(|&k| lg.edge(k).target)
                            .filter(|&u| lift.root_of(u) == next_root),
                    );
                }
            }
            frontier = next;
        }
        count += frontier.iter().filter(|&&t| t == start).count() as u64;
    }
    count
}

/// For every based closed walk of `g` with at most `max_len` steps, count the
/// closed walks of the lift that project onto it and compare with the number
/// of spanning forests rooted at the walk's vertex set.
pub fn count_walk_lifts<R: Ring>(
    g: &Digraph<R>,
    lift: &LiftGraph<R>,
    max_len: usize,
) -> Result<Vec<WalkLift>> {
    if max_len > crate::walks::MAX_WALK_LEN {
        return Err(Error::CapExceeded {
            what: "closed walk length",
            size: max_len as u128,
            cap: crate::walks::MAX_WALK_LEN as u128,
        });
    }
    g.require_set_sized()?;
    let mut forest_counts: BTreeMap<VertexSet, u64> = BTreeMap::new();
    let mut records = Vec::new();
    let mut failure = None;
    for_each_closed_walk(g, max_len, |walk| {
        if failure.is_some() {
            return;
        }
        let support: VertexSet = walk.iter().copied().collect();
        let forests = match forest_counts.get(&support) {
            Some(&k) => k,
            None => {
                let k = k_count(g, support).expect("walk support is nonempty");
                forest_counts.insert(support, k);
                k
            }
        };
        let lifts = count_lifts_of(lift, walk);
        if lifts != forests {
            failure = Some(format!("walk {walk:?}: {lifts} lifts, {forests} forests rooted at {support}"));
        }
        records.push(WalkLift {
            walk: walk.to_vec(),
            support,
            lifts,
            forests,
        });
    });
    match failure {
        Some(w) => Err(Error::violation("walk-lifts", w)),
        None => Ok(records),
    }
}
