//! Simple undirected graphs over dense vertex ids, the edge-list reader and
//! the transformations used by the search-number and minor tests.

use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    OutOfRange { line: usize, vertex: usize, n: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    NoSuchVertex { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    Loop(usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
}

/// A set of vertex ids. Equality and hashing ignore the underlying capacity.
#[derive(Clone, Default)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(FixedBitSet::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        VertexSet(s)
    }

    pub fn insert(&mut self, v: usize) {
        self.0.grow(v + 1);
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.0.len() {
            self.0.set(v, false);
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.maximum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(&self.0 & &other.0)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for VertexSet {}

impl Hash for VertexSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for v in self.iter() {
            v.hash(state);
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(vs: [usize; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from 0-based edges; duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `uv`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::NoSuchVertex { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                Ok(true)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Neighbourhoods as bitmasks; `None` when n > 64.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|ns| ns.iter().fold(0u64, |m, &v| m | 1 << v))
                .collect(),
        )
    }

    pub fn is_connected(&self) -> bool {
        components(self, &self.vertex_set()).len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundariedGraph {
    pub graph: Graph,
    pub boundary: VertexSet,
}

impl BoundariedGraph {
    pub fn new(graph: Graph, boundary: VertexSet) -> Result<Self, GraphError> {
        if let Some(v) = boundary.iter().find(|&v| v >= graph.n()) {
            return Err(GraphError::NoSuchVertex { vertex: v, n: graph.n() });
        }
        Ok(BoundariedGraph { graph, boundary })
    }
}

/// Connected components of `g[restrict]`, ordered by smallest member.
pub fn components(g: &Graph, restrict: &VertexSet) -> Vec<VertexSet> {
    let mut seen = VertexSet::with_capacity(g.n());
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in restrict.iter() {
        if seen.contains(s) {
            continue;
        }
        let mut comp = VertexSet::with_capacity(g.n());
        seen.insert(s);
        stack.push(s);
        while let Some(u) = stack.pop() {
            comp.insert(u);
            for &v in g.neighbors(u) {
                if restrict.contains(v) && !seen.contains(v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        out.push(comp);
    }
    out
}

pub fn is_connected_boundaried(bg: &BoundariedGraph) -> bool {
    let comps = components(&bg.graph, &bg.graph.vertex_set());
    if bg.boundary.is_empty() {
        comps.len() <= 1
    } else {
        comps.iter().all(|c| c.iter().any(|v| bg.boundary.contains(v)))
    }
}

/// Replaces every edge `uv` by a path `u-a-b-v`; the fresh vertices of the
/// i-th edge (in `edges()` order) are `n + 2i` and `n + 2i + 1`.
pub fn subdivide_twice(g: &Graph) -> Graph {
    let n = g.n();
    let edges: Vec<_> = g.edges().collect();
    let mut h = Graph::new(n + 2 * edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        let a = n + 2 * i;
        let b = a + 1;
        h.add_edge(u, a).unwrap();
        h.add_edge(a, b).unwrap();
        h.add_edge(b, v).unwrap();
    }
    h
}

/// Adds a universal vertex with id `n`.
pub fn apex_augment(g: &Graph) -> Graph {
    let n = g.n();
    let mut h = Graph::new(n + 1);
    for (u, v) in g.edges() {
        h.add_edge(u, v).unwrap();
    }
    for v in 0..n {
        h.add_edge(v, n).unwrap();
    }
    h
}

/// Contracts `uv` into `min(u, v)`; ids above `max(u, v)` shift down by one.
pub fn contract_edge(g: &Graph, u: usize, v: usize) -> Result<Graph, GraphError> {
    if !g.has_edge(u, v) {
        return Err(GraphError::NotAnEdge(u, v));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let relabel = |x: usize| {
        if x == gone {
            keep
        } else if x > gone {
            x - 1
        } else {
            x
        }
    };
    let mut h = Graph::new(g.n() - 1);
    for (a, b) in g.edges() {
        let (a, b) = (relabel(a), relabel(b));
        if a != b {
            h.add_edge(a, b).unwrap();
        }
    }
    Ok(h)
}

/// Result of reading an edge-list document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicate_edges: usize,
}

/// Reads the `p <n> <m>` / `e <u> <v>` format (1-based ids, `c` comments).
pub fn parse_graph(text: &str) -> Result<ParsedGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut graph = Graph::new(0);
    let mut seen_edges = 0;
    let mut duplicate_edges = 0;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&head) = toks.first() else { continue };
        if head.starts_with('c') {
            continue;
        }
        let err = |msg: &str| GraphError::Parse { line, msg: msg.to_string() };
        match head {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header"));
                }
                let nums = match toks.len() {
                    3 => &toks[1..3],
                    4 => &toks[2..4],
                    _ => return Err(err("expected `p <n> <m>`")),
                };
                let n = nums[0].parse().map_err(|_| err("bad vertex count"))?;
                let m = nums[1].parse().map_err(|_| err("bad edge count"))?;
                header = Some((n, m));
                graph = Graph::new(n);
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(err("edge before `p` header"));
                };
                if toks.len() != 3 {
                    return Err(err("expected `e <u> <v>`"));
                }
                let mut ends = [0usize; 2];
                for (k, t) in toks[1..].iter().enumerate() {
                    let x: usize = t.parse().map_err(|_| err("bad vertex id"))?;
                    if x == 0 || x > n {
                        return Err(GraphError::OutOfRange { line, vertex: x, n });
                    }
                    ends[k] = x - 1;
                }
                if ends[0] == ends[1] {
                    return Err(GraphError::SelfLoop { line, vertex: ends[0] + 1 });
                }
                seen_edges += 1;
                if !graph.add_edge(ends[0], ends[1]).unwrap() {
                    duplicate_edges += 1;
                }
            }
            _ => return Err(err("unrecognised line")),
        }
    }
    let Some((_, m)) = header else {
        return Err(GraphError::Parse { line: last_line.max(1), msg: "missing `p` header".into() });
    };
    if seen_edges != m {
        return Err(GraphError::Parse {
            line: last_line,
            msg: format!("header declares {m} edges but {seen_edges} were given"),
        });
    }
    Ok(ParsedGraph { graph, duplicate_edges })
}

/// Writes `g` in the edge-list format.
pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    s
}
