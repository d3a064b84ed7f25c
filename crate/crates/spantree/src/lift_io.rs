//! Lift files: the lift in the graph file format plus a `.labels` sidecar
//! with one `vertex <k> root <r> tree <encoding>` line per lift vertex.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use spantree_core::algebra::Ring;
use spantree_core::lift::LiftGraph;

use crate::format::{GraphFile, ParseError, WeightSpec};

/// Label of one lift vertex as read from a sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub root: usize,
    pub tree: String,
}

/// The lift of `file` as a graph file. Lift weights are copied from the base
/// edge `(root of source, root of target)`, so variables carry over by name.
pub fn lift_graph_file<R: Ring>(file: &GraphFile, lift: &LiftGraph<R>) -> GraphFile {
    let lg = lift.graph();
    let edges = lg
        .edges()
        .iter()
        .map(|e| {
            let base = (lift.root_of(e.source), lift.root_of(e.target));
            ((e.source, e.target), file.edges[&base].clone())
        })
        .collect();
    let diag = (0..lift.vertex_count())
        .filter_map(|t| file.diag.get(&lift.root_of(t)).filter(|w| !w.is_zero()).map(|w| (t, w.clone())))
        .collect();
    GraphFile {
        n: lift.vertex_count(),
        edges,
        diag,
        vweights: BTreeMap::new(),
    }
}

pub fn labels_text<R: Ring>(lift: &LiftGraph<R>) -> String {
    let mut out = String::new();
    for (k, t) in lift.trees().iter().enumerate() {
        writeln!(out, "vertex {k} root {} tree {}", t.root(), t.encoding()).unwrap();
    }
    out
}

pub fn parse_labels(text: &str) -> Result<BTreeMap<usize, Label>, ParseError> {
    let mut labels = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = || ParseError {
            line,
            message: format!("expected 'vertex <k> root <r> tree <encoding>', got '{content}'"),
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let ["vertex", k, "root", r, "tree", enc] = tokens.as_slice() else {
            return Err(bad());
        };
        let k: usize = k.parse().map_err(|_| bad())?;
        let root: usize = r.parse().map_err(|_| bad())?;
        let label = Label {
            root,
            tree: enc.to_string(),
        };
        if labels.insert(k, label).is_some() {
            return Err(ParseError {
                line,
                message: format!("duplicate label for lift vertex {k}"),
            });
        }
    }
    Ok(labels)
}

/// Compare a lift file and its labels with the lift computed from the base
/// graph. Vertex numbering in the file may differ; vertices are matched by
/// tree encoding. Returns the first discrepancy.
pub fn compare_lift<R: Ring>(
    base: &GraphFile,
    lift: &LiftGraph<R>,
    file: &GraphFile,
    labels: &BTreeMap<usize, Label>,
) -> Result<(), String> {
    let expected = lift_graph_file(base, lift);
    if file.n != expected.n {
        return Err(format!("lift file has {} vertices, the lift has {}", file.n, expected.n));
    }
    let by_encoding: BTreeMap<String, usize> = lift
        .trees()
        .iter()
        .enumerate()
        .map(|(k, t)| (t.encoding(), k))
        .collect();
    let mut to_lift = vec![usize::MAX; file.n];
    let mut used = vec![false; file.n];
    for v in 0..file.n {
        let label = labels.get(&v).ok_or_else(|| format!("lift vertex {v} has no label"))?;
        let k = *by_encoding
            .get(&label.tree)
            .ok_or_else(|| format!("lift vertex {v}: '{}' is not a spanning tree of the base graph", label.tree))?;
        if lift.root_of(k) != label.root {
            return Err(format!(
                "lift vertex {v}: tree '{}' has root {}, label says {}",
                label.tree,
                lift.root_of(k),
                label.root
            ));
        }
        if std::mem::replace(&mut used[k], true) {
            return Err(format!("tree '{}' labels more than one lift vertex", label.tree));
        }
        to_lift[v] = k;
    }
    if let Some(extra) = labels.keys().find(|&&v| v >= file.n) {
        return Err(format!("label for lift vertex {extra}, which does not exist"));
    }
    let edges: BTreeMap<(usize, usize), &WeightSpec> = file
        .edges
        .iter()
        .map(|(&(u, v), w)| ((to_lift[u], to_lift[v]), w))
        .collect();
    for ((u, v), w) in &expected.edges {
        match edges.get(&(*u, *v)) {
            None => return Err(format!("missing lift edge {} -> {}", lift.tree(*u), lift.tree(*v))),
            Some(got) if *got != w => {
                return Err(format!("lift edge {} -> {}: weight {got}, expected {w}", lift.tree(*u), lift.tree(*v)))
            }
            Some(_) => {}
        }
    }
    if let Some((u, v)) = edges.keys().find(|e| !expected.edges.contains_key(e)) {
        return Err(format!("unexpected lift edge {} -> {}", lift.tree(*u), lift.tree(*v)));
    }
    for v in 0..file.n {
        let got = file.diag.get(&v).filter(|w| !w.is_zero());
        let want = expected.diag.get(&to_lift[v]);
        if got != want {
            let show = |w: Option<&WeightSpec>| w.map_or_else(|| "0".to_string(), |w| w.to_string());
            return Err(format!("lift vertex {v}: diagonal {}, expected {}", show(got), show(want)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use spantree_core::lift::{build_lift, DEFAULT_LIFT_CAP};

    const K3: &str = "graph 3\nedge 0 1 1\nedge 0 2 1\nedge 1 0 1\nedge 1 2 1\nedge 2 0 1\nedge 2 1 1\n";

    fn setup(text: &str) -> (GraphFile, LiftGraph<spantree_core::algebra::MultiPoly>) {
        let file = GraphFile::parse(text).unwrap();
        let lift = build_lift(&file.to_symbolic().unwrap().graph, DEFAULT_LIFT_CAP).unwrap();
        (file, lift)
    }

    #[test]
    fn two_cycle_lift_is_isomorphic() {
        let (file, lift) = setup("graph 2\nedge 0 1 sym\nedge 1 0 sym\n");
        let out = lift_graph_file(&file, &lift);
        assert_eq!(out, file);
        assert_eq!(labels_text(&lift), "vertex 0 root 0 tree 1>0\nvertex 1 root 1 tree 0>1\n");
    }

    #[test]
    fn round_trip_passes_and_permutation_is_accepted() {
        let (file, lift) = setup(K3);
        let out = lift_graph_file(&file, &lift);
        let labels = parse_labels(&labels_text(&lift)).unwrap();
        assert_eq!(compare_lift(&file, &lift, &out, &labels), Ok(()));

        // relabel lift vertex k as 8 - k
        let flip = |k: usize| 8 - k;
        let permuted = GraphFile {
            n: out.n,
            edges: out.edges.iter().map(|(&(u, v), w)| ((flip(u), flip(v)), w.clone())).collect(),
            diag: BTreeMap::new(),
            vweights: BTreeMap::new(),
        };
        let relabeled = labels.iter().map(|(&k, l)| (flip(k), l.clone())).collect();
        assert_eq!(compare_lift(&file, &lift, &permuted, &relabeled), Ok(()));
    }

    #[test]
    fn corruptions_are_found() {
        let (file, lift) = setup(K3);
        let out = lift_graph_file(&file, &lift);
        let labels = parse_labels(&labels_text(&lift)).unwrap();

        let mut dropped = out.clone();
        dropped.edges.pop_first();
        assert!(compare_lift(&file, &lift, &dropped, &labels).unwrap_err().contains("missing"));

        let mut reweighted = out.clone();
        *reweighted.edges.values_mut().next().unwrap() = WeightSpec::Var("z".into());
        assert!(compare_lift(&file, &lift, &reweighted, &labels).unwrap_err().contains("weight"));

        let mut bad_labels = labels.clone();
        bad_labels.get_mut(&0).unwrap().tree = "1>2,2>1".into();
        assert!(compare_lift(&file, &lift, &out, &bad_labels).unwrap_err().contains("not a spanning tree"));

        let mut diag = out.clone();
        diag.diag.insert(3, WeightSpec::Var("d".into()));
        assert!(compare_lift(&file, &lift, &diag, &labels).unwrap_err().contains("diagonal"));
    }

    #[test]
    fn label_syntax_errors() {
        assert_eq!(parse_labels("vertex 0 root 0\n").unwrap_err().line, 1);
        let dup = "vertex 0 root 0 tree 1>0\nvertex 0 root 1 tree 0>1\n";
        assert!(parse_labels(dup).unwrap_err().message.contains("duplicate"));
    }
}
