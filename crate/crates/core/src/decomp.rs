//! Path-decompositions: validation, prefix connectivity, nice step sequences
//! and an exact pathwidth routine for small graphs.

use thiserror::Error;

use crate::graph::{components, is_connected_boundaried, BoundariedGraph, Graph, VertexSet};

/// Largest graph `exact_pathwidth` accepts by default.
pub const PATHWIDTH_CAP: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("bag {bag} mentions vertex {vertex}, but the graph has {n} vertices")]
    UnknownVertex { bag: usize, vertex: usize, n: usize },
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(usize),
    #[error("edge ({0}, {1}) is in no bag")]
    UncoveredEdge(usize, usize),
    #[error("the bags containing vertex {0} are not consecutive")]
    BrokenTrace(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph has {n} vertices; exact pathwidth is limited to {cap}, supply a decomposition file")]
    Capacity { n: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        PathDecomposition { bags }
    }

    pub fn from_vecs(bags: &[Vec<usize>]) -> Self {
        PathDecomposition { bags: bags.iter().map(|b| b.iter().copied().collect()).collect() }
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.bags.iter().map(VertexSet::to_vec).collect()
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// max |A_i| - 1, or 0 when every bag is empty.
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Drops empty bags.
    pub fn compact(&self) -> PathDecomposition {
        PathDecomposition { bags: self.bags.iter().filter(|b| !b.is_empty()).cloned().collect() }
    }

    /// First and last bag index of every vertex below `n`.
    fn traces(&self, n: usize) -> Result<Vec<Option<(usize, usize)>>, DecompositionError> {
        let mut tr: Vec<Option<(usize, usize)>> = vec![None; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for v in bag.iter() {
                if v >= n {
                    return Err(DecompositionError::UnknownVertex { bag: i, vertex: v, n });
                }
                tr[v] = Some(match tr[v] {
                    None => (i, i),
                    Some((a, b)) if b + 1 == i => (a, i),
                    Some(_) => return Err(DecompositionError::BrokenTrace(v)),
                });
            }
        }
        Ok(tr)
    }
}

/// Checks the three axioms and returns the width.
pub fn validate(g: &Graph, p: &PathDecomposition) -> Result<usize, DecompositionError> {
    if p.bags.is_empty() {
        return Err(DecompositionError::NoBags);
    }
    let n = g.n();
    for (i, bag) in p.bags.iter().enumerate() {
        if let Some(v) = bag.iter().find(|&v| v >= n) {
            return Err(DecompositionError::UnknownVertex { bag: i, vertex: v, n });
        }
    }
    let covered = p.bags.iter().fold(VertexSet::with_capacity(n), |mut acc, b| {
        acc.union_with(b);
        acc
    });
    if let Some(v) = (0..n).find(|&v| !covered.contains(v)) {
        return Err(DecompositionError::UncoveredVertex(v));
    }
    for (u, v) in g.edges() {
        if !p.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            return Err(DecompositionError::UncoveredEdge(u, v));
        }
    }
    p.traces(n)?;
    Ok(p.width())
}

/// Index of the first prefix `V_i` whose boundaried graph is disconnected.
pub fn first_disconnected_prefix(
    g: &Graph,
    p: &PathDecomposition,
    boundary: &VertexSet,
) -> Option<usize> {
    let mut prefix = VertexSet::with_capacity(g.n());
    for (i, bag) in p.bags.iter().enumerate() {
        prefix.union_with(bag);
        let comps = components(g, &prefix);
        let ok = if prefix.iter().any(|v| boundary.contains(v)) {
            comps.iter().all(|c| c.iter().any(|v| boundary.contains(v)))
        } else {
            comps.len() <= 1
        };
        if !ok {
            return Some(i);
        }
    }
    None
}

pub fn is_connected_decomposition(g: &Graph, p: &PathDecomposition, boundary: &VertexSet) -> bool {
    first_disconnected_prefix(g, p, boundary).is_none()
}

/// Induced subgraph on `keep`, with vertices renumbered in ascending order.
pub fn induced(g: &Graph, keep: &VertexSet) -> (Graph, Vec<usize>) {
    let ids: Vec<usize> = keep.iter().collect();
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in ids.iter().enumerate() {
        pos[v] = i;
    }
    let mut h = Graph::new(ids.len());
    for (u, v) in g.edges() {
        if pos[u] != usize::MAX && pos[v] != usize::MAX {
            h.add_edge(pos[u], pos[v]).unwrap();
        }
    }
    (h, ids)
}

/// Whether `(g[V_i], V_i ∩ B)` is connected for the given prefix set.
pub fn prefix_is_connected(g: &Graph, prefix: &VertexSet, boundary: &VertexSet) -> bool {
    let (h, ids) = induced(g, prefix);
    let b = ids.iter().enumerate().filter(|(_, v)| boundary.contains(**v)).map(|(i, _)| i).collect();
    is_connected_boundaried(&BoundariedGraph { graph: h, boundary: b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Introduce(usize),
    Forget(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceStep {
    pub kind: StepKind,
    /// The bag after this step.
    pub bag: VertexSet,
}

/// Expands `p` into single-vertex steps: per bag transition, forgets then
/// introduces in ascending id order, and finally forgets everything left.
pub fn make_nice(p: &PathDecomposition) -> Result<Vec<NiceStep>, DecompositionError> {
    let n = p.bags.iter().filter_map(VertexSet::max).max().map_or(0, |m| m + 1);
    p.traces(n)?;
    let mut steps = Vec::new();
    let mut cur = VertexSet::with_capacity(n);
    let mut push = |kind, cur: &VertexSet| steps.push(NiceStep { kind, bag: cur.clone() });
    for bag in p.bags.iter().chain(std::iter::once(&VertexSet::new())) {
        for v in cur.difference(bag).to_vec() {
            cur.remove(v);
            push(StepKind::Forget(v), &cur);
        }
        for v in bag.difference(&cur).to_vec() {
            cur.insert(v);
            push(StepKind::Introduce(v), &cur);
        }
    }
    Ok(steps)
}

/// Decomposition of a vertex order: bag `i` holds `order[i]` and every earlier
/// vertex with a neighbour at position `i` or later. Its prefixes are the
/// prefixes of the order, so it is connected when they are.
pub fn layout_decomposition(g: &Graph, order: &[usize]) -> PathDecomposition {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // last[u]: position of u's last neighbour (or of u itself).
    let last: Vec<usize> =
        (0..g.n()).map(|u| g.neighbors(u).iter().map(|&x| pos[x]).fold(pos[u], usize::max)).collect();
    let bags = (0..order.len())
        .map(|i| order[..=i].iter().copied().filter(|&u| u == order[i] || last[u] >= i).collect())
        .collect();
    PathDecomposition::new(bags)
}

/// Best of the greedy connected orders from every start vertex; each step
/// adds the frontier vertex that leaves the fewest open vertices. An upper
/// bound on connected pathwidth for connected `g`.
pub fn greedy_connected_decomposition(g: &Graph) -> Option<(usize, PathDecomposition)> {
    let n = g.n();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for s in 0..n {
        let mut placed = vec![false; n];
        // open[u]: neighbours of u not yet placed.
        let mut open: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
        let mut order = Vec::with_capacity(n);
        let mut width = 0;
        let mut frontier = 0;
        let mut next = Some(s);
        while let Some(v) = next {
            width = width.max(frontier);
            placed[v] = true;
            order.push(v);
            if open[v] > 0 {
                frontier += 1;
            }
            for &u in g.neighbors(v) {
                open[u] -= 1;
                if placed[u] && open[u] == 0 {
                    frontier -= 1;
                }
            }
            next = (0..n)
                .filter(|&u| !placed[u] && g.neighbors(u).iter().any(|&x| placed[x]))
                .min_by_key(|&u| {
                    let closed = g.neighbors(u).iter().filter(|&&x| placed[x] && open[x] == 1).count();
                    let opens = usize::from(open[u] > 0);
                    (frontier + opens - closed, usize::MAX - closed, u)
                });
        }
        if order.len() == n && best.as_ref().map_or(true, |(w, _)| width < *w) {
            best = Some((width, order));
        }
    }
    best.map(|(w, order)| (w, layout_decomposition(g, &order)))
}

/// Exact pathwidth by dynamic programming over vertex subsets.
pub fn exact_pathwidth(g: &Graph) -> Result<(usize, PathDecomposition), DecompositionError> {
    exact_pathwidth_capped(g, PATHWIDTH_CAP)
}

pub fn exact_pathwidth_capped(
    g: &Graph,
    cap: usize,
) -> Result<(usize, PathDecomposition), DecompositionError> {
    let n = g.n();
    if n > cap || n > 31 {
        return Err(DecompositionError::Capacity { n, cap: cap.min(31) });
    }
    if n == 0 {
        return Ok((0, PathDecomposition::new(vec![VertexSet::new()])));
    }
    let adj: Vec<u32> = g.adjacency_masks().unwrap().into_iter().map(|m| m as u32).collect();
    let full = (1u32 << n) - 1;
    let size = 1usize << n;
    // border[S]: vertices of S with a neighbour outside S.
    let border = |s: u32| -> u8 {
        let mut c = 0;
        let mut rest = s;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[u] & !s != 0 {
                c += 1;
            }
        }
        c
    };
    let mut bd = vec![0u8; size];
    let mut best = vec![u8::MAX; size];
    best[0] = 0;
    bd[0] = 0;
    for s in 1..size as u32 {
        bd[s as usize] = border(s);
        let mut b = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let t = (s & !(1 << v)) as usize;
            b = b.min(best[t].max(bd[t]));
        }
        best[s as usize] = b;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let mut rest = s;
        loop {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let t = (s & !(1 << v)) as usize;
            if best[t].max(bd[t]) == best[s as usize] {
                order.push(v as usize);
                s = t as u32;
                break;
            }
        }
    }
    order.reverse();
    let mut bags = Vec::with_capacity(n);
    let mut prefix = 0u32;
    for &v in &order {
        let mut bag: VertexSet = [v].into();
        let mut rest = prefix;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[u] & !prefix != 0 {
                bag.insert(u);
            }
        }
        bags.push(bag);
        prefix |= 1 << v;
    }
    Ok((best[full as usize] as usize, PathDecomposition::new(bags)))
}

/// Reads one bag per line (1-based ids); blank line = empty bag; `c` comments.
pub fn parse_decomposition(text: &str) -> Result<PathDecomposition, DecompositionError> {
    let mut bags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('c') {
            continue;
        }
        let mut bag = VertexSet::new();
        for tok in line.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| DecompositionError::Parse {
                line: i + 1,
                msg: format!("bad vertex id `{tok}`"),
            })?;
            if v == 0 {
                return Err(DecompositionError::Parse { line: i + 1, msg: "vertex ids start at 1".into() });
            }
            bag.insert(v - 1);
        }
        bags.push(bag);
    }
    if bags.is_empty() {
        return Err(DecompositionError::NoBags);
    }
    Ok(PathDecomposition::new(bags))
}

pub fn format_decomposition(p: &PathDecomposition) -> String {
    let mut s = String::new();
    for bag in &p.bags {
        let ids: Vec<String> = bag.iter().map(|v| (v + 1).to_string()).collect();
        s.push_str(&ids.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(bags: &[&[usize]]) -> PathDecomposition {
        PathDecomposition::new(bags.iter().map(|b| b.iter().copied().collect()).collect())
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate(&path(3), &pd(&[&[0, 1], &[1, 2]])), Ok(1));
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(validate(&k3, &pd(&[&[0, 1, 2]])), Ok(2));
        assert_eq!(
            validate(&path(3), &pd(&[&[0, 1], &[2]])),
            Err(DecompositionError::UncoveredEdge(1, 2))
        );
        assert_eq!(
            validate(&path(3), &pd(&[&[0, 1], &[1, 2], &[0]])),
            Err(DecompositionError::BrokenTrace(0))
        );
        assert_eq!(validate(&path(3), &pd(&[&[0, 1]])), Err(DecompositionError::UncoveredVertex(2)));
    }

    #[test]
    fn connectivity_examples() {
        let none = VertexSet::new();
        assert!(is_connected_decomposition(&path(3), &pd(&[&[0, 1], &[1, 2]]), &none));
        assert!(!is_connected_decomposition(&path(3), &pd(&[&[0, 2], &[0, 1], &[1, 2]]), &none));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(is_connected_decomposition(&star, &pd(&[&[0, 1], &[0, 2], &[0, 3]]), &none));
    }

    #[test]
    fn nice_examples() {
        use StepKind::*;
        let kinds = |p: &PathDecomposition| make_nice(p).unwrap().into_iter().map(|s| s.kind).collect::<Vec<_>>();
        assert_eq!(
            kinds(&pd(&[&[0, 1], &[1, 2]])),
            vec![Introduce(0), Introduce(1), Forget(0), Introduce(2), Forget(1), Forget(2)]
        );
        assert_eq!(kinds(&pd(&[&[0]])), vec![Introduce(0), Forget(0)]);
        assert_eq!(
            kinds(&pd(&[&[0, 1, 2]])),
            vec![Introduce(0), Introduce(1), Introduce(2), Forget(0), Forget(1), Forget(2)]
        );
        assert!(make_nice(&pd(&[&[0], &[1], &[0]])).is_err());
    }

    #[test]
    fn pathwidth_examples() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        for (g, w) in [(path(4), 1), (c4, 2), (k4, 3), (Graph::new(1), 0)] {
            let (pw, p) = exact_pathwidth(&g).unwrap();
            assert_eq!(pw, w);
            assert_eq!(validate(&g, &p), Ok(w));
        }
        assert!(matches!(
            exact_pathwidth(&Graph::new(26)),
            Err(DecompositionError::Capacity { n: 26, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let p = parse_decomposition("c two bags\n1 2\n\n2 3\n").unwrap();
        assert_eq!(p, pd(&[&[0, 1], &[], &[1, 2]]));
        assert_eq!(parse_decomposition(&format_decomposition(&p)).unwrap(), p);
        assert!(parse_decomposition("1 x").is_err());
    }

    #[test]
    fn greedy_layouts() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        for (g, w) in [(path(6), 1), (c4, 2), (star, 1), (Graph::new(1), 0)] {
            let (k, p) = greedy_connected_decomposition(&g).unwrap();
            assert_eq!(k, w);
            assert_eq!(validate(&g, &p), Ok(k));
            assert!(is_connected_decomposition(&g, &p, &VertexSet::new()));
        }
        let p = layout_decomposition(&path(3), &[1, 0, 2]);
        assert_eq!(p, pd(&[&[1], &[0, 1], &[1, 2]]));
        assert!(greedy_connected_decomposition(&Graph::new(0)).is_none());
    }
}
