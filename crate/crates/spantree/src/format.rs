//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! graph 3
//! edge 0 1 1/2
//! edge 1 2 sym        # variable x_1_2
//! edge 2 0 rate       # any identifier names a variable
//! diag 0 1/4
//! vweight 1 sym       # variable y_1
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use spantree_core::algebra::{parse_rational, MultiPoly, Rational, VarRegistry};
use spantree_core::graph::{Digraph, Edge};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// A weight as written in a file: an exact rational or a variable name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Value(Rational),
    Var(String),
}

impl WeightSpec {
    fn parse(token: &str, sym_name: impl FnOnce() -> String) -> Option<WeightSpec> {
        if token == "sym" {
            return Some(WeightSpec::Var(sym_name()));
        }
        if let Some(q) = parse_rational(token) {
            return Some(WeightSpec::Value(q));
        }
        let mut chars = token.chars();
        let head = chars.next()?;
        let ident = (head.is_ascii_alphabetic() || head == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        ident.then(|| WeightSpec::Var(token.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, WeightSpec::Value(q) if *q == Rational::from_integer(0.into()))
    }

    pub fn to_poly(&self, reg: &mut VarRegistry) -> MultiPoly {
        match self {
            WeightSpec::Value(q) => MultiPoly::constant(q.clone()),
            WeightSpec::Var(name) => reg.var(name),
        }
    }

    pub fn as_value(&self) -> Option<&Rational> {
        match self {
            WeightSpec::Value(q) => Some(q),
            WeightSpec::Var(_) => None,
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Value(q) => write!(f, "{q}"),
            WeightSpec::Var(name) => f.write_str(name),
        }
    }
}

/// Parsed contents of a graph file. Maps are keyed by vertex or vertex pair,
/// so serialization is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: BTreeMap<(usize, usize), WeightSpec>,
    pub diag: BTreeMap<usize, WeightSpec>,
    pub vweights: BTreeMap<usize, WeightSpec>,
}

/// A graph file turned into ring-valued data. Vertex weights are `None`
/// when the file has no `vweight` lines.
pub struct Symbolic {
    pub graph: Digraph<MultiPoly>,
    pub vweights: Option<Vec<MultiPoly>>,
    pub registry: VarRegistry,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
        let mut n = None;
        let mut file = GraphFile {
            n: 0,
            edges: BTreeMap::new(),
            diag: BTreeMap::new(),
            vweights: BTreeMap::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let vertex = |tok: &str| -> Result<usize, ParseError> {
                let v: usize = tok.parse().map_err(|_| err(line, format!("bad vertex index '{tok}'")))?;
                match n {
                    Some(count) if v < count => Ok(v),
                    Some(count) => Err(err(line, format!("vertex {v} out of range for {count} vertices"))),
                    None => Err(err(line, "'graph <n>' must come first")),
                }
            };
            match tokens.as_slice() {
                ["graph", count] => {
                    if n.is_some() {
                        return Err(err(line, "repeated 'graph' line"));
                    }
                    let count: usize = count.parse().map_err(|_| err(line, format!("bad vertex count '{count}'")))?;
                    if count == 0 {
                        return Err(err(line, "a graph needs at least one vertex"));
                    }
                    n = Some(count);
                    file.n = count;
                }
                ["edge", u, v, w] => {
                    let (u, v) = (vertex(u)?, vertex(v)?);
                    if u == v {
                        return Err(err(line, format!("self-loop {u} -> {u}; use a diag line")));
                    }
                    let weight = WeightSpec::parse(w, || format!("x_{u}_{v}"))
                        .ok_or_else(|| err(line, format!("bad weight '{w}'")))?;
                    if file.edges.insert((u, v), weight).is_some() {
                        return Err(err(line, format!("duplicate edge {u} -> {v}")));
                    }
                }
                ["diag", v, w] => {
                    let v = vertex(v)?;
                    let weight = WeightSpec::parse(w, || format!("d_{v}"))
                        .ok_or_else(|| err(line, format!("bad weight '{w}'")))?;
                    if file.diag.insert(v, weight).is_some() {
                        return Err(err(line, format!("duplicate diag for {v}")));
                    }
                }
                ["vweight", v, w] => {
                    let v = vertex(v)?;
                    let weight = WeightSpec::parse(w, || format!("y_{v}"))
                        .ok_or_else(|| err(line, format!("bad weight '{w}'")))?;
                    if file.vweights.insert(v, weight).is_some() {
                        return Err(err(line, format!("duplicate vweight for {v}")));
                    }
                }
                [kw, ..] if ["graph", "edge", "diag", "vweight"].contains(kw) => {
                    return Err(err(line, format!("wrong number of fields for '{kw}'")));
                }
                [kw, ..] => return Err(err(line, format!("unknown directive '{kw}'"))),
                [] => unreachable!("empty lines are skipped"),
            }
        }
        if n.is_none() {
            return Err(err(text.lines().count().max(1), "missing 'graph <n>' line"));
        }
        Ok(file)
    }

    /// Canonical text: edges, then diagonal, then vertex weights, each sorted.
    pub fn serialize(&self) -> String {
        let mut out = format!("graph {}\n", self.n);
        for ((u, v), w) in &self.edges {
            writeln!(out, "edge {u} {v} {w}").unwrap();
        }
        for (v, w) in &self.diag {
            writeln!(out, "diag {v} {w}").unwrap();
        }
        for (v, w) in &self.vweights {
            writeln!(out, "vweight {v} {w}").unwrap();
        }
        out
    }

    pub fn is_symbolic(&self) -> bool {
        self.edges
            .values()
            .chain(self.diag.values())
            .chain(self.vweights.values())
            .any(|w| matches!(w, WeightSpec::Var(_)))
    }

    pub fn has_vweights(&self) -> bool {
        !self.vweights.is_empty()
    }

    /// Polynomial-valued graph. Variables are registered in file order:
    /// edges, diagonal, vertex weights.
    pub fn to_symbolic(&self) -> Result<Symbolic, spantree_core::Error> {
        let mut registry = VarRegistry::new();
        let edges = self
            .edges
            .iter()
            .map(|(&(u, v), w)| Edge {
                source: u,
                target: v,
                weight: w.to_poly(&mut registry),
            })
            .collect();
        let diagonal = (0..self.n)
            .map(|v| self.diag.get(&v).map_or_else(MultiPoly::zero_poly, |w| w.to_poly(&mut registry)))
            .collect();
        let graph = Digraph::new(self.n, edges, Some(diagonal))?;
        let vweights = self.has_vweights().then(|| {
            (0..self.n)
                .map(|v| self.vweights.get(&v).map_or_else(MultiPoly::zero_poly, |w| w.to_poly(&mut registry)))
                .collect()
        });
        Ok(Symbolic {
            graph,
            vweights,
            registry,
        })
    }

    pub fn from_digraph(g: &Digraph<Rational>) -> GraphFile {
        let zero = Rational::from_integer(0.into());
        GraphFile {
            n: g.vertex_count(),
            edges: g
                .edges()
                .iter()
                .map(|e| ((e.source, e.target), WeightSpec::Value(e.weight.clone())))
                .collect(),
            diag: g
                .diagonal()
                .iter()
                .enumerate()
                .filter(|(_, d)| **d != zero)
                .map(|(v, d)| (v, WeightSpec::Value(d.clone())))
                .collect(),
            vweights: BTreeMap::new(),
        }
    }
}

trait ZeroPoly {
    fn zero_poly() -> Self;
}

impl ZeroPoly for MultiPoly {
    fn zero_poly() -> Self {
        MultiPoly::constant(Rational::from_integer(0.into()))
    }
}
