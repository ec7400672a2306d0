//! Typical sequences of non-negative integers and the domination order on
//! integer sequences and on profiles (sequences of sequences).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("empty sequence")]
    Empty,
    #[error("profiles have {0} and {1} segments")]
    Shape(usize, usize),
}

/// A segmented integer sequence.
pub type Profile = Vec<Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typical {
    pub values: Vec<u32>,
    /// Source indices of `values`, leftmost possible embedding.
    pub tips: Vec<usize>,
}

/// The typical sequence of `a` together with its tips.
pub fn tseq(a: &[u32]) -> Result<Typical, SeqError> {
    if a.is_empty() {
        return Err(SeqError::Empty);
    }
    let values = typical_values(a);
    let mut tips = Vec::with_capacity(values.len());
    let mut i = 0;
    for &v in &values {
        while a[i] != v {
            i += 1;
        }
        tips.push(i);
        i += 1;
    }
    Ok(Typical { values, tips })
}

/// Values of the typical sequence; empty for empty input.
pub fn typical_values(a: &[u32]) -> Vec<u32> {
    let mut st = Vec::with_capacity(a.len().min(16));
    for &v in a {
        push_typical(&mut st, v);
    }
    st
}

/// Appends `v` to a typical sequence and restores typicality.
pub(crate) fn push_typical(st: &mut Vec<u32>, v: u32) {
    if st.last() == Some(&v) {
        return;
    }
    let len = st.len();
    if len >= 2 {
        // Smallest i whose interior st[i+1..] lies between st[i] and v.
        let (mut lo, mut hi) = (u32::MAX, 0);
        let mut cut = None;
        for i in (0..len - 1).rev() {
            lo = lo.min(st[i + 1]);
            hi = hi.max(st[i + 1]);
            let a = st[i];
            if (a <= lo && hi <= v) || (a >= hi && lo >= v) {
                cut = Some(i);
            }
        }
        if let Some(i) = cut {
            st.truncate(i + 1);
        }
    }
    if st.last() != Some(&v) {
        st.push(v);
    }
}

pub fn is_typical(a: &[u32]) -> bool {
    typical_values(a) == a
}

/// `a ⪯ b`: some extensions satisfy `a* ≤ b*` pointwise.
pub fn dominates_int(a: &[u32], b: &[u32]) -> bool {
    let ta = typical_values(a);
    let tb = typical_values(b);
    dominates_typical(&ta, &tb)
}

/// Grid reachability; callers pass typical sequences (any sequence works, but
/// the grid stays small only for typical ones).
pub(crate) fn dominates_typical(a: &[u32], b: &[u32]) -> bool {
    dominates_by(a.len(), b.len(), |i| a[i], |j| b[j])
}

/// `dominates_typical` over indexed accessors.
pub(crate) fn dominates_by(n: usize, m: usize, a: impl Fn(usize) -> u32, b: impl Fn(usize) -> u32) -> bool {
    if n == 0 || m == 0 {
        return n == 0 && m == 0;
    }
    let mut small = [[false; 64]; 2];
    let mut big;
    let (prev, cur): (&mut [bool], &mut [bool]) = if m <= 64 {
        let (p, c) = small.split_at_mut(1);
        (&mut p[0][..m], &mut c[0][..m])
    } else {
        big = vec![false; 2 * m];
        big.split_at_mut(m)
    };
    for i in 0..n {
        let x = a(i);
        for j in 0..m {
            let from = if i == 0 {
                j == 0 || cur[j - 1]
            } else {
                prev[j] || (j > 0 && (cur[j - 1] || prev[j - 1]))
            };
            cur[j] = from && x <= b(j);
        }
        prev.copy_from_slice(cur);
    }
    prev[m - 1]
}

/// Segment-wise domination of profiles.
pub fn dominates_profile(p: &[Vec<u32>], q: &[Vec<u32>]) -> Result<bool, SeqError> {
    if p.len() != q.len() {
        return Err(SeqError::Shape(p.len(), q.len()));
    }
    Ok(p.iter().zip(q).all(|(a, b)| dominates_int(a, b)))
}
