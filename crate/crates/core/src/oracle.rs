//! Brute-force ground truth for small graphs: connected pathwidth and
//! pathwidth by exhaustive search over introduce/forget move sequences.

use itertools::Itertools;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::graph::Graph;

pub const ORACLE_CAP: usize = 15;
pub const LAYOUT_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("graph has {n} vertices; this oracle handles at most {cap}")]
pub struct CapacityError {
    pub n: usize,
    pub cap: usize,
}

fn masks(g: &Graph, cap: usize) -> Result<Vec<u32>, CapacityError> {
    if g.n() > cap {
        return Err(CapacityError { n: g.n(), cap });
    }
    Ok(g.adjacency_masks().unwrap().into_iter().map(|m| m as u32).collect())
}

/// Whether some sequence of moves empties the graph with bags of size at
/// most `w + 1`, optionally keeping every prefix connected.
fn search(adj: &[u32], w: usize, connected: bool) -> bool {
    let n = adj.len();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    let mut stack = vec![(0u32, 0u32)];
    seen.insert(0);
    while let Some((f, a)) = stack.pop() {
        if f == full {
            return true;
        }
        let used = f | a;
        let mut push = |f2: u32, a2: u32| {
            if seen.insert((f2 as u64) << 32 | a2 as u64) {
                stack.push((f2, a2));
            }
        };
        for v in 0..n {
            let bit = 1u32 << v;
            if a & bit != 0 {
                if adj[v] & !used == 0 {
                    push(f | bit, a & !bit);
                }
            } else if used & bit == 0
                && (a.count_ones() as usize) < w + 1
                && (!connected || used == 0 || adj[v] & used != 0)
            {
                push(f, a | bit);
            }
        }
    }
    false
}

/// Is there a connected path-decomposition of width at most `w`?
pub fn oracle_cpw(g: &Graph, w: usize) -> Result<bool, CapacityError> {
    Ok(search(&masks(g, ORACLE_CAP)?, w, true))
}

/// Pathwidth by the same search without the connectivity requirement.
pub fn oracle_pw(g: &Graph) -> Result<usize, CapacityError> {
    let adj = masks(g, ORACLE_CAP)?;
    Ok((0..).find(|&w| search(&adj, w, false)).unwrap())
}

/// Connected pathwidth threshold of the search oracle.
pub fn oracle_cpw_value(g: &Graph) -> Result<usize, CapacityError> {
    let adj = masks(g, ORACLE_CAP)?;
    Ok((0..=g.n()).find(|&w| search(&adj, w, true)).unwrap_or(usize::MAX))
}

/// Tries every introduce order, forgetting each vertex as soon as all its
/// neighbours have been introduced.
pub fn oracle_cpw_layout(g: &Graph, w: usize) -> Result<bool, CapacityError> {
    let adj = masks(g, LAYOUT_CAP)?;
    let n = adj.len();
    Ok((0..n).permutations(n).any(|order| {
        let (mut f, mut a) = (0u32, 0u32);
        for v in order {
            let used = f | a;
            if used != 0 && adj[v] & used == 0 {
                return false;
            }
            a |= 1 << v;
            if a.count_ones() as usize > w + 1 {
                return false;
            }
            let used = f | a;
            for u in 0..n {
                if a >> u & 1 == 1 && adj[u] & !used == 0 {
                    a &= !(1 << u);
                    f |= 1 << u;
                }
            }
        }
        true
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    #[test]
    fn examples() {
        let p4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(oracle_cpw(&p4, 1), Ok(true));
        assert_eq!(oracle_cpw(&c4, 1), Ok(false));
        assert_eq!(oracle_cpw(&c4, 2), Ok(true));
        assert_eq!(oracle_cpw(&k4, 2), Ok(false));
        assert_eq!(oracle_cpw(&k4, 3), Ok(true));

        assert_eq!(oracle_cpw_layout(&g(3, &[(0, 1), (1, 2)]), 1), Ok(true));
        let paw = g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(oracle_cpw_layout(&paw, 2), Ok(true));
        assert_eq!(oracle_cpw(&paw, 2), Ok(true));

        assert_eq!(oracle_pw(&g(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])), Ok(1));
        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        assert_eq!(oracle_pw(&g(6, &c6)), Ok(2));
        let k33: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert_eq!(oracle_pw(&g(6, &k33)), Ok(3));
    }

    #[test]
    fn capacity() {
        assert_eq!(oracle_cpw(&Graph::new(16), 1), Err(CapacityError { n: 16, cap: 15 }));
        assert!(oracle_cpw_layout(&Graph::new(9), 1).is_err());
    }
}
