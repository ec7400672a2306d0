//! Boundaried sequences: the (bd, cc, val) abstraction of a path-decomposition
//! restricted to a boundary, with breakpoints, representatives, models,
//! profiles, domination, projection, insertion and encoding.
//!
//! Boundary vertices are small labels (`0..64`) so that every set is a `u64`.

use std::borrow::Borrow;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::decomp::{validate, DecompositionError, PathDecomposition};
use crate::graph::{components, BoundariedGraph, VertexSet};
use crate::intseq::{dominates_typical, push_typical, typical_values, Profile};

pub const MAX_LABELS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BSeqError {
    #[error("malformed sequence: {0}")]
    Malformed(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid insertion: {0}")]
    InvalidInsertion(String),
    #[error("boundary has {0} vertices; at most 64 are supported")]
    TooManyLabels(usize),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

/// A set of boundary labels.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn single(l: usize) -> Self {
        LabelSet(1 << l)
    }

    pub fn contains(self, l: usize) -> bool {
        l < 64 && self.0 >> l & 1 == 1
    }

    pub fn with(self, l: usize) -> Self {
        LabelSet(self.0 | 1 << l)
    }

    pub fn without(self, l: usize) -> Self {
        LabelSet(self.0 & !(1 << l))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        LabelSet(self.0 | o.0)
    }

    pub fn inter(self, o: Self) -> Self {
        LabelSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        LabelSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn meets(self, o: Self) -> bool {
        self.0 & o.0 != 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let l = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                l
            })
        })
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(LabelSet::EMPTY, LabelSet::with)
    }
}

impl<const N: usize> From<[usize; N]> for LabelSet {
    fn from(ls: [usize; N]) -> Self {
        ls.into_iter().collect()
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Disjoint nonempty blocks, sorted by minimum, plus a count of empty blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NearPartition {
    blocks: SmallVec<[LabelSet; 4]>,
    empties: u32,
}

impl NearPartition {
    pub fn new(blocks: Vec<LabelSet>, empties: u32) -> Result<Self, BSeqError> {
        let mut seen = LabelSet::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(BSeqError::Malformed("empty block listed explicitly".into()));
            }
            if b.meets(seen) {
                return Err(BSeqError::Malformed("blocks overlap".into()));
            }
            seen = seen.union(b);
        }
        Ok(Self::from_blocks(blocks.into_iter().collect(), empties))
    }

    fn from_blocks(mut blocks: SmallVec<[LabelSet; 4]>, empties: u32) -> Self {
        blocks.sort_unstable_by_key(|b| b.0.trailing_zeros());
        NearPartition { blocks, empties }
    }

    /// `{∅}`: a connected part with no boundary vertex.
    pub fn lone_empty() -> Self {
        NearPartition { blocks: SmallVec::new(), empties: 1 }
    }

    pub fn singleton(l: usize) -> Self {
        let mut blocks = SmallVec::new();
        blocks.push(LabelSet::single(l));
        NearPartition { blocks, empties: 0 }
    }

    pub fn blocks(&self) -> &[LabelSet] {
        &self.blocks
    }

    pub fn empties(&self) -> u32 {
        self.empties
    }

    pub fn ground(&self) -> LabelSet {
        self.blocks.iter().fold(LabelSet::EMPTY, |a, &b| a.union(b))
    }

    pub fn is_partition(&self) -> bool {
        self.empties == 0 || (self.empties == 1 && self.blocks.is_empty())
    }

    /// Blocks intersected with `s`; vanished blocks become empty blocks.
    pub fn project(&self, s: LabelSet) -> NearPartition {
        let mut empties = self.empties;
        let mut blocks = SmallVec::new();
        for &b in &self.blocks {
            let c = b.inter(s);
            if c.is_empty() {
                empties += 1;
            } else {
                blocks.push(c);
            }
        }
        NearPartition::from_blocks(blocks, empties)
    }

    /// Adds the block `{x}` and merges it with every block meeting `xs`.
    /// With `drop_empties` the empty blocks are discarded first.
    pub(crate) fn merged(&self, x: usize, xs: LabelSet, drop_empties: bool) -> NearPartition {
        let mut merged = LabelSet::single(x);
        let mut blocks: SmallVec<[LabelSet; 4]> = SmallVec::new();
        for &b in &self.blocks {
            if b.meets(xs) {
                merged = merged.union(b);
            } else {
                blocks.push(b);
            }
        }
        blocks.push(merged);
        NearPartition::from_blocks(blocks, if drop_empties { 0 } else { self.empties })
    }

    fn relabel(&self, map: &impl Fn(LabelSet) -> LabelSet) -> NearPartition {
        NearPartition::from_blocks(self.blocks.iter().map(|&b| map(b)).collect(), self.empties)
    }
}

/// Whether every block of `q` lies inside a block of `q2`.
pub fn coarser(q: &NearPartition, q2: &NearPartition) -> Result<bool, BSeqError> {
    if !q.ground().is_subset(q2.ground()) {
        return Err(BSeqError::Domain("ground of the finer near-partition is not contained".into()));
    }
    Ok(refines(q, q2))
}

fn refines(q: &NearPartition, q2: &NearPartition) -> bool {
    q.blocks.iter().all(|&b| q2.blocks.iter().any(|&c| b.is_subset(c)))
}

impl fmt::Display for NearPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}|e:{}]", parts.join(","), self.empties)
    }
}

impl fmt::Debug for NearPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BElement {
    pub bd: LabelSet,
    pub cc: NearPartition,
    pub val: u32,
}

impl BElement {
    pub fn new(bd: LabelSet, cc: NearPartition, val: u32) -> Self {
        BElement { bd, cc, val }
    }
}

impl fmt::Display for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bd={} cc={} val={}", self.bd, self.cc, self.val)
    }
}

impl fmt::Debug for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BreakKind {
    Bd,
    Cc,
}

/// Breakpoint positions, 0-based and ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Breakpoints {
    pub type1: Vec<usize>,
    pub type2: Vec<usize>,
    pub type3: Vec<usize>,
}

impl Breakpoints {
    pub fn all(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.type1.iter().chain(&self.type2).chain(&self.type3).copied().collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelEntry {
    pub bd: LabelSet,
    pub cc: NearPartition,
    pub kind: BreakKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Model(pub Vec<ModelEntry>);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BSequence {
    boundary: LabelSet,
    elems: Vec<BElement>,
}

impl BSequence {
    pub fn new(boundary: LabelSet, elems: Vec<BElement>) -> Result<Self, BSeqError> {
        let s = BSequence { boundary, elems };
        s.check()?;
        Ok(s)
    }

    pub(crate) fn new_unchecked(boundary: LabelSet, elems: Vec<BElement>) -> Self {
        BSequence { boundary, elems }
    }

    /// Verifies the interval, ground-growth and coarsening invariants.
    pub fn check(&self) -> Result<(), BSeqError> {
        let bad = |m: String| Err(BSeqError::Malformed(m));
        if self.elems.is_empty() {
            return bad("no elements".into());
        }
        let mut ground = LabelSet::EMPTY;
        let mut closed = LabelSet::EMPTY;
        let mut prev_bd = LabelSet::EMPTY;
        for (j, e) in self.elems.iter().enumerate() {
            if !e.bd.is_subset(self.boundary) {
                return bad(format!("position {j}: bd leaves the boundary"));
            }
            closed = closed.union(prev_bd.minus(e.bd));
            if e.bd.meets(closed) {
                return bad(format!("position {j}: a boundary vertex reappears"));
            }
            ground = ground.union(e.bd);
            if e.cc.ground() != ground {
                return bad(format!("position {j}: cc ground differs from the bd prefix union"));
            }
            if j > 0 && !refines(&self.elems[j - 1].cc, &e.cc) {
                return bad(format!("position {j}: cc is not coarser than its predecessor"));
            }
            prev_bd = e.bd;
        }
        Ok(())
    }

    pub fn boundary(&self) -> LabelSet {
        self.boundary
    }

    pub fn elements(&self) -> &[BElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn vals(&self) -> Vec<u32> {
        self.elems.iter().map(|e| e.val).collect()
    }

    pub fn width(&self) -> u32 {
        self.elems.iter().map(|e| e.bd.len() as u32 + e.val).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.elems.iter().all(|e| e.cc.is_partition())
    }

    /// Positions that are type-1 (`Bd`) or type-2 (`Cc`) breakpoints.
    fn skeleton(&self) -> Vec<(usize, BreakKind)> {
        let e = &self.elems;
        (0..e.len())
            .filter_map(|j| {
                if j == 0 || e[j].bd != e[j - 1].bd {
                    Some((j, BreakKind::Bd))
                } else if e[j].cc != e[j - 1].cc {
                    Some((j, BreakKind::Cc))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Half-open ranges between consecutive type-1/2 breakpoints; the last
    /// one runs to the end of the sequence.
    fn gaps(&self) -> Vec<(usize, usize)> {
        let sk = self.skeleton();
        (0..sk.len())
            .map(|t| (sk[t].0, sk.get(t + 1).map_or(self.elems.len(), |n| n.0)))
            .collect()
    }

    pub fn breakpoints(&self) -> Breakpoints {
        let mut bp = Breakpoints::default();
        for (j, k) in self.skeleton() {
            match k {
                BreakKind::Bd => bp.type1.push(j),
                BreakKind::Cc => bp.type2.push(j),
            }
        }
        let mut tips = Vec::new();
        rep_indices_into(&self.elems, &mut tips, &mut Vec::new());
        bp.type3 = tips.into_iter().filter(|j| !bp.type1.contains(j) && !bp.type2.contains(j)).collect();
        bp
    }

    /// Positions kept by `rep`, ascending.
    pub fn rep_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        rep_indices_into(&self.elems, &mut out, &mut Vec::new());
        out
    }

    pub fn rep(&self) -> BSequence {
        self.pick(&self.rep_indices())
    }

    pub fn is_rep(&self) -> bool {
        self.rep_indices().len() == self.elems.len()
    }

    pub(crate) fn pick(&self, idx: &[usize]) -> BSequence {
        BSequence { boundary: self.boundary, elems: idx.iter().map(|&j| self.elems[j].clone()).collect() }
    }

    pub fn model(&self) -> Model {
        Model(
            self.skeleton()
                .into_iter()
                .map(|(j, kind)| ModelEntry { bd: self.elems[j].bd, cc: self.elems[j].cc.clone(), kind })
                .collect(),
        )
    }

    pub fn profile(&self) -> Profile {
        self.gaps().into_iter().map(|(a, b)| self.elems[a..b].iter().map(|e| e.val).collect()).collect()
    }

    /// Profile with every segment reduced to its typical sequence.
    pub(crate) fn typical_profile(&self) -> Profile {
        self.profile().iter().map(|s| typical_values(s)).collect()
    }

    pub fn dominates(&self, t: &BSequence) -> bool {
        if self.boundary != t.boundary || self.model() != t.model() {
            return false;
        }
        profile_dominates(&self.typical_profile(), &t.typical_profile())
    }

    /// Restriction to the boundary `b2`.
    pub fn project(&self, b2: LabelSet) -> Result<BSequence, BSeqError> {
        if !b2.is_subset(self.boundary) {
            return Err(BSeqError::Domain(format!("{b2} is not inside the boundary {}", self.boundary)));
        }
        Ok(self.project_unchecked(b2))
    }

    pub(crate) fn project_unchecked(&self, b2: LabelSet) -> BSequence {
        let elems = self
            .elems
            .iter()
            .map(|e| BElement {
                bd: e.bd.inter(b2),
                cc: e.cc.project(b2),
                val: e.val + e.bd.minus(b2).len() as u32,
            })
            .collect();
        BSequence { boundary: b2, elems }
    }

    /// Inserts the new boundary vertex `x` with neighbours `xs` over the
    /// positions `f..=l` (0-based).
    pub fn insert(&self, x: usize, xs: LabelSet, f: usize, l: usize) -> Result<BSequence, BSeqError> {
        let bad = |m: String| Err(BSeqError::InvalidInsertion(m));
        if x >= MAX_LABELS {
            return Err(BSeqError::TooManyLabels(x + 1));
        }
        if self.boundary.contains(x) {
            return bad(format!("{x} is already a boundary vertex"));
        }
        if !xs.is_subset(self.boundary) {
            return bad(format!("{xs} is not inside the boundary"));
        }
        if f > l || l >= self.elems.len() {
            return bad(format!("positions {f}..={l} out of range for length {}", self.elems.len()));
        }
        let covered = self.elems[f..=l].iter().fold(LabelSet::EMPTY, |a, e| a.union(e.bd));
        if !xs.is_subset(covered) {
            return bad(format!("{xs} is not covered by positions {f}..={l}"));
        }
        Ok(self.insert_unchecked(x, xs, f, l))
    }

    /// The sequence framed by a leading void element and a trailing empty
    /// element: two empty bags around the decomposition.
    pub(crate) fn padded(&self) -> BSequence {
        let mut elems = Vec::with_capacity(self.elems.len() + 2);
        elems.push(BElement::new(LabelSet::EMPTY, NearPartition::lone_empty(), 0));
        elems.extend_from_slice(&self.elems);
        let last = self.elems.last().map_or_else(NearPartition::lone_empty, |e| e.cc.clone());
        elems.push(BElement::new(LabelSet::EMPTY, last, 0));
        BSequence { boundary: self.boundary, elems }
    }

    /// Leading positions standing for the empty graph: no boundary vertex
    /// and no other vertex anywhere up to them.
    pub(crate) fn void_prefix(&self) -> usize {
        self.elems.iter().take_while(|e| e.bd.is_empty() && e.val == 0).count()
    }

    pub(crate) fn insert_unchecked(&self, x: usize, xs: LabelSet, f: usize, l: usize) -> BSequence {
        let void = self.void_prefix();
        let mut elems = Vec::with_capacity(self.elems.len());
        elems.extend_from_slice(&self.elems[..f]);
        for (j, e) in self.elems.iter().enumerate().skip(f) {
            elems.push(BElement {
                bd: if j <= l { e.bd.with(x) } else { e.bd },
                cc: e.cc.merged(x, xs, j < void),
                val: e.val,
            });
        }
        BSequence { boundary: self.boundary.with(x), elems }
    }

    /// The extension duplicating position `j` once.
    pub fn duplicate(&self, j: usize) -> BSequence {
        let mut elems = self.elems.clone();
        elems.insert(j, elems[j].clone());
        BSequence { boundary: self.boundary, elems }
    }

    /// Renames labels through `map` (which must be injective on the boundary).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> BSequence {
        let m = |s: LabelSet| s.iter().map(&map).collect::<LabelSet>();
        BSequence {
            boundary: m(self.boundary),
            elems: self
                .elems
                .iter()
                .map(|e| BElement { bd: m(e.bd), cc: e.cc.relabel(&m), val: e.val })
                .collect(),
        }
    }
}

/// Representative positions of `elems`: per gap, the leftmost embedding of
/// the gap's typical val sequence, with the last tip moved to the end of the
/// gap when the typical sequence has more than one value.
pub(crate) fn rep_indices_into<E: Borrow<BElement>>(elems: &[E], out: &mut Vec<usize>, stack: &mut Vec<u32>) {
    out.clear();
    let n = elems.len();
    let mut a = 0;
    while a < n {
        let mut b = a + 1;
        while b < n && {
            let (x, y) = (elems[b].borrow(), elems[b - 1].borrow());
            x.bd == y.bd && x.cc == y.cc
        } {
            b += 1;
        }
        stack.clear();
        for e in &elems[a..b] {
            push_typical(stack, e.borrow().val);
        }
        let mut i = a;
        for &v in stack.iter() {
            while elems[i].borrow().val != v {
                i += 1;
            }
            out.push(i);
            i += 1;
        }
        if stack.len() > 1 {
            *out.last_mut().unwrap() = b - 1;
        }
        a = b;
    }
}

/// Whether the element stands for an empty bag.
pub(crate) fn is_blank(e: &BElement) -> bool {
    e.bd.is_empty() && e.val == 0
}

/// Segment-wise domination of profiles whose segments are already typical.
pub(crate) fn profile_dominates(p: &[Vec<u32>], q: &[Vec<u32>]) -> bool {
    p.len() == q.len() && p.iter().zip(q).all(|(a, b)| dominates_typical(a, b))
}

impl fmt::Display for BSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.elems {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B={} {:?}", self.boundary, self.elems)
    }
}

/// The sequence a concrete decomposition induces on `bg`. Boundary vertices
/// get labels by ascending id; the label order is returned alongside.
pub fn encode(bg: &BoundariedGraph, p: &PathDecomposition) -> Result<(BSequence, Vec<usize>), BSeqError> {
    validate(&bg.graph, p)?;
    let labels: Vec<usize> = bg.boundary.iter().collect();
    if labels.len() > MAX_LABELS {
        return Err(BSeqError::TooManyLabels(labels.len()));
    }
    let mut label_of = vec![usize::MAX; bg.graph.n()];
    for (i, &v) in labels.iter().enumerate() {
        label_of[v] = i;
    }
    let to_labels = |s: &VertexSet| s.iter().filter(|&v| label_of[v] != usize::MAX).map(|v| label_of[v]).collect();
    let mut prefix = VertexSet::with_capacity(bg.graph.n());
    let mut elems = Vec::with_capacity(p.len());
    for bag in &p.bags {
        prefix.union_with(bag);
        let cc = if prefix.is_empty() {
            NearPartition::lone_empty()
        } else {
            let mut blocks = SmallVec::new();
            let mut empties = 0;
            for c in components(&bg.graph, &prefix) {
                let b: LabelSet = to_labels(&c);
                if b.is_empty() {
                    empties += 1;
                } else {
                    blocks.push(b);
                }
            }
            NearPartition::from_blocks(blocks, empties)
        };
        let bd: LabelSet = to_labels(bag);
        elems.push(BElement { bd, cc, val: (bag.len() - bd.len()) as u32 });
    }
    Ok((BSequence { boundary: (0..labels.len()).collect(), elems }, labels))
}
