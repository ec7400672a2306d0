//! The decision procedure for `cpw(G) <= w`: domination sets of
//! representative sequences carried along a nice path-decomposition.

use std::borrow::Borrow;
use std::hash::{Hash, Hasher};

use rustc_hash::{FxHashMap, FxHashSet, FxHasher};
use smallvec::SmallVec;
use thiserror::Error;

use crate::bseq::{encode, is_blank, rep_indices_into, BElement, BSeqError, BSequence, LabelSet, NearPartition, MAX_LABELS};
use crate::decomp::{
    exact_pathwidth, greedy_connected_decomposition, induced, is_connected_decomposition, make_nice, validate, DecompositionError,
    PathDecomposition, StepKind,
};
use crate::graph::{BoundariedGraph, Graph, GraphError, VertexSet};
use crate::intseq::dominates_by;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("width budget must be at least 1")]
    Budget,
    #[error("{0}")]
    Domain(String),
    #[error("decomposition is too wide: {0} boundary vertices (at most 64)")]
    TooWide(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Sequence(#[from] BSeqError),
}

/// How an entry of a domination set was obtained from the previous set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Initial(u8),
    Forget { parent: usize },
    Insert { parent: usize, f: usize, l: usize, dup_f: bool, dup_l: bool },
}

#[derive(Clone, Debug)]
pub struct DominationSet {
    budget: u32,
    boundary: LabelSet,
    entries: Vec<BSequence>,
    provenance: Vec<Provenance>,
    /// Entries are stored without blank elements at the ends and are framed
    /// by one blank element on each side before insertion.
    trimmed: bool,
}

impl DominationSet {
    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn boundary(&self) -> LabelSet {
        self.boundary
    }

    pub fn entries(&self) -> &[BSequence] {
        &self.entries
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Representative form, width, connectivity, size bounds and the
    /// antichain property.
    pub fn check_invariants(&self) -> Result<(), DpError> {
        let fail = |m: String| Err(DpError::Invariant(m));
        let k = self.boundary.len();
        let b = self.budget as usize;
        let max_model = 3 * k + 2;
        let max_len = (3 * k + 2) * (2 * b + 3);
        for (i, s) in self.entries.iter().enumerate() {
            if s.boundary() != self.boundary {
                return fail(format!("entry {i} has boundary {}", s.boundary()));
            }
            s.check()?;
            if !s.is_rep() {
                return fail(format!("entry {i} is not in representative form"));
            }
            if s.width() > self.budget {
                return fail(format!("entry {i} has width {} > {}", s.width(), self.budget));
            }
            if !s.is_connected() {
                return fail(format!("entry {i} is not connected"));
            }
            let model = s.model();
            if model.0.len() > max_model {
                return fail(format!("entry {i} has {} type-1/2 breakpoints > {max_model}", model.0.len()));
            }
            if s.len() > max_len {
                return fail(format!("entry {i} has length {} > {max_len}", s.len()));
            }
        }
        let keyed: Vec<Keyed> = self.entries.iter().map(Keyed::new).collect();
        for class in model_classes(&keyed) {
            for &i in &class {
                for &j in &class {
                    if i != j && keyed[i].dominates(&keyed[j]) {
                        return fail(format!("entry {i} dominates entry {j}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The four one-vertex sequences over the label `x`, in order S_1..S_4.
pub fn initial_sequences(x: usize) -> [BSequence; 4] {
    let b = LabelSet::single(x);
    let on = || BElement::new(b, NearPartition::singleton(x), 0);
    let before = || BElement::new(LabelSet::EMPTY, NearPartition::lone_empty(), 0);
    let after = || BElement::new(LabelSet::EMPTY, NearPartition::singleton(x), 0);
    [
        BSequence::new_unchecked(b, vec![on()]),
        BSequence::new_unchecked(b, vec![before(), on()]),
        BSequence::new_unchecked(b, vec![before(), on(), after()]),
        BSequence::new_unchecked(b, vec![on(), after()]),
    ]
}

pub fn initial_dset(x: usize, budget: u32) -> Result<DominationSet, DpError> {
    if budget == 0 {
        return Err(DpError::Budget);
    }
    if x >= MAX_LABELS {
        return Err(DpError::TooWide(x + 1));
    }
    Ok(DominationSet {
        budget,
        boundary: LabelSet::single(x),
        entries: initial_sequences(x).into(),
        provenance: (0..4).map(Provenance::Initial).collect(),
        trimmed: false,
    })
}

pub fn forget_routine(d: &DominationSet, x: usize) -> Result<DominationSet, DpError> {
    if !d.boundary.contains(x) {
        return Err(DpError::Domain(format!("{x} is not a boundary vertex")));
    }
    let boundary = d.boundary.without(x);
    let cands = restrict_all(d, boundary, |parent| Provenance::Forget { parent });
    Ok(finish(d.budget, boundary, cands, d.trimmed))
}

/// The (<= 2)-extension of `s` duplicating `s_f` (before it) and/or `s_l`
/// (after it), with the insertion interval it prescribes.
pub(crate) fn extension(
    s: &BSequence,
    f: usize,
    l: usize,
    dup_f: bool,
    dup_l: bool,
) -> (BSequence, usize, usize) {
    let e = s.elements();
    let mut elems = Vec::with_capacity(e.len() + 2);
    elems.extend_from_slice(&e[..f]);
    if dup_f {
        elems.push(e[f].clone());
    }
    elems.extend_from_slice(&e[f..=l]);
    if dup_l {
        elems.push(e[l].clone());
    }
    elems.extend_from_slice(&e[l + 1..]);
    let shift = dup_f as usize;
    (BSequence::new_unchecked(s.boundary(), elems), f + shift, l + shift)
}

const VARIANTS: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];

/// One insertion choice: positions `f..=l` of the entry, optionally
/// duplicating `s_f` before and `s_l` after.
#[derive(Clone, Copy)]
struct Span {
    f: usize,
    l: usize,
    dup_f: bool,
    dup_l: bool,
}

/// Every position of an entry in its three possible roles (before the new
/// vertex's interval, inside it, after it), already restricted to the kept
/// labels. `None` marks a disconnected element.
struct Table {
    before: Vec<Option<BElement>>,
    inside: Vec<Option<BElement>>,
    after: Vec<Option<BElement>>,
}

fn restrict(bd: LabelSet, cc: NearPartition, val: u32, keep: LabelSet) -> Option<BElement> {
    let cc = if cc.ground().is_subset(keep) { cc } else { cc.project(keep) };
    cc.is_partition().then(|| BElement { bd: bd.inter(keep), cc, val: val + bd.minus(keep).len() as u32 })
}

impl Table {
    fn new(s: &BSequence, ins: Option<(usize, LabelSet)>, keep: LabelSet) -> Self {
        let e = s.elements();
        let mut t = Table { before: Vec::with_capacity(e.len()), inside: vec![], after: vec![] };
        let mut void = true;
        for src in e {
            void &= is_blank(src);
            t.before.push(restrict(src.bd, src.cc.clone(), src.val, keep));
            if let Some((x, xs)) = ins {
                let m = src.cc.merged(x, xs, void);
                t.inside.push(restrict(src.bd.with(x), m.clone(), src.val, keep));
                t.after.push(restrict(src.bd, m, src.val, keep));
            }
        }
        t
    }
}

#[derive(Default)]
struct Scratch {
    idx: Vec<usize>,
    stack: Vec<u32>,
}

/// `rep(project(insert(extension(s)), keep))` from the entry's table, or
/// `None` when the result is disconnected. A disconnected insertion stays
/// disconnected under projection, so checking the end result is enough. With
/// `trim` the blank ends are dropped.
fn build<'a>(
    t: &'a Table,
    span: Option<Span>,
    keep: LabelSet,
    trim: bool,
    refs: &mut Vec<&'a BElement>,
    sc: &mut Scratch,
) -> Option<BSequence> {
    refs.clear();
    match span {
        None => {
            for e in &t.before {
                refs.push(e.as_ref()?);
            }
        }
        Some(Span { f, l, dup_f, dup_l }) => {
            for e in &t.before[..f] {
                refs.push(e.as_ref()?);
            }
            if dup_f {
                refs.push(t.before[f].as_ref()?);
            }
            for e in &t.inside[f..=l] {
                refs.push(e.as_ref()?);
            }
            if dup_l {
                refs.push(t.after[l].as_ref()?);
            }
            for e in &t.after[l + 1..] {
                refs.push(e.as_ref()?);
            }
        }
    }
    rep_indices_into(refs, &mut sc.idx, &mut sc.stack);
    let (a, b) = if trim { trim_range_by(&sc.idx, refs) } else { (0, sc.idx.len()) };
    Some(BSequence::new_unchecked(keep, sc.idx[a..b].iter().map(|&j| refs[j].clone()).collect()))
}

/// Distinct candidates, each with its least provenance.
#[derive(Default)]
struct Candidates {
    seen: FxHashMap<BSequence, Provenance>,
    generated: usize,
}

impl Candidates {
    fn add(&mut self, s: BSequence, p: Provenance) {
        self.generated += 1;
        self.seen.entry(s).and_modify(|q| *q = p.min(*q)).or_insert(p);
    }
}

/// Inserts label `x` (neighbours `xs`) into every entry and restricts the
/// results to `keep`. When `x` itself is dropped, only the shortest interval
/// per start is tried with the end duplicated: every other choice yields the
/// same boundary data with pointwise larger values.
fn expand(d: &DominationSet, x: usize, xs: LabelSet, keep: LabelSet) -> Candidates {
    let lazy = !keep.contains(x);
    let mut sc = Scratch::default();
    let mut cands = Candidates::default();
    for (parent, s) in d.entries.iter().enumerate() {
        let padded;
        let s = if d.trimmed {
            padded = s.padded();
            &padded
        } else {
            s
        };
        let table = Table::new(s, Some((x, xs)), keep);
        let mut refs = Vec::with_capacity(s.len() + 2);
        let e = s.elements();
        for f in 0..e.len() {
            let mut covered = LabelSet::EMPTY;
            let mut widest = 0;
            for l in f..e.len() {
                covered = covered.union(e[l].bd);
                widest = widest.max(e[l].bd.len() as u32 + e[l].val);
                if widest + 1 > d.budget {
                    break;
                }
                if !xs.is_subset(covered) {
                    continue;
                }
                let variants: &[(bool, bool)] = if lazy { &[(false, true), (true, true)] } else { &VARIANTS };
                for &(dup_f, dup_l) in variants {
                    let span = Span { f, l, dup_f, dup_l };
                    if let Some(t) = build(&table, Some(span), keep, d.trimmed, &mut refs, &mut sc) {
                        cands.add(t, Provenance::Insert { parent, f, l, dup_f, dup_l });
                    }
                }
                if lazy {
                    break;
                }
            }
        }
    }
    cands
}

/// Restricts every entry (or every initial sequence) to `keep`.
fn restrict_all(d: &DominationSet, keep: LabelSet, tag: impl Fn(usize) -> Provenance) -> Candidates {
    let mut sc = Scratch::default();
    let mut cands = Candidates::default();
    for (i, s) in d.entries.iter().enumerate() {
        let table = Table::new(s, None, keep);
        let mut refs = Vec::with_capacity(s.len());
        if let Some(t) = build(&table, None, keep, d.trimmed, &mut refs, &mut sc) {
            cands.add(t, tag(i));
        }
    }
    cands
}

pub fn insert_routine(d: &DominationSet, x: usize, xs: LabelSet) -> Result<DominationSet, DpError> {
    if x >= MAX_LABELS {
        return Err(DpError::TooWide(x + 1));
    }
    if d.boundary.contains(x) {
        return Err(DpError::Domain(format!("{x} is already a boundary vertex")));
    }
    if !xs.is_subset(d.boundary) {
        return Err(DpError::Domain(format!("{xs} is not inside the boundary {}", d.boundary)));
    }
    let keep = d.boundary.with(x);
    Ok(finish(d.budget, keep, expand(d, x, xs, keep), d.trimmed))
}

fn finish(budget: u32, boundary: LabelSet, cands: Candidates, trimmed: bool) -> DominationSet {
    let cands = cands.seen.into_iter().collect();
    let (entries, provenance) = prune_with(cands, true).into_iter().unzip();
    DominationSet { budget, boundary, entries, provenance, trimmed }
}

/// The part of `idx` left after dropping blank elements at both ends (all of
/// it when everything is blank).
fn trim_range_by<E: Borrow<BElement>>(idx: &[usize], elems: &[E]) -> (usize, usize) {
    let blank = |j: &&usize| is_blank(elems[**j].borrow());
    let a = idx.iter().take_while(blank).count();
    let b = idx.len() - idx[a..].iter().rev().take_while(blank).count();
    if a == b { (0, idx.len().min(1)) } else { (a, b) }
}

/// Reduces `entries` to an antichain under domination, keeping the earliest
/// of equivalent entries.
pub fn prune(entries: Vec<BSequence>) -> Vec<BSequence> {
    let tagged = entries.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    prune_with(tagged, false).into_iter().map(|(s, _)| s).collect()
}

/// A sequence with its type-1/2 positions, a hash of its model and, per
/// profile segment, the first, last, least and greatest value.
struct Keyed<'a> {
    seq: &'a BSequence,
    sk: SmallVec<[u32; 16]>,
    summary: SmallVec<[[u32; 4]; 16]>,
    hash: u64,
}

impl<'a> Keyed<'a> {
    fn new(seq: &'a BSequence) -> Self {
        let e = seq.elements();
        let mut sk = SmallVec::new();
        let mut summary: SmallVec<[[u32; 4]; 16]> = SmallVec::new();
        let mut h = FxHasher::default();
        for j in 0..e.len() {
            let v = e[j].val;
            if j == 0 || e[j].bd != e[j - 1].bd || e[j].cc != e[j - 1].cc {
                sk.push(j as u32);
                summary.push([v, v, v, v]);
                e[j].bd.hash(&mut h);
                e[j].cc.hash(&mut h);
            } else {
                let m = summary.last_mut().unwrap();
                m[1] = v;
                m[2] = m[2].min(v);
                m[3] = m[3].max(v);
            }
        }
        Keyed { seq, sk, summary, hash: h.finish() }
    }

    fn same_model(&self, o: &Keyed) -> bool {
        let (a, b) = (self.seq.elements(), o.seq.elements());
        self.sk.len() == o.sk.len()
            && self.sk.iter().zip(&o.sk).all(|(&i, &j)| {
                let (x, y) = (&a[i as usize], &b[j as usize]);
                x.bd == y.bd && x.cc == y.cc
            })
    }

    fn segment(&self, t: usize) -> (usize, usize) {
        let end = self.sk.get(t + 1).map_or(self.seq.len(), |&j| j as usize);
        (self.sk[t] as usize, end)
    }

    /// Profile domination; both sides must share the model.
    fn dominates(&self, o: &Keyed) -> bool {
        // Aligned extensions match first with first and last with last, and
        // every value meets some value of the other side.
        if !self.summary.iter().zip(&o.summary).all(|(p, q)| p.iter().zip(q).all(|(x, y)| x <= y)) {
            return false;
        }
        let (a, b) = (self.seq.elements(), o.seq.elements());
        (0..self.sk.len()).all(|t| {
            let ((s0, s1), (t0, t1)) = (self.segment(t), o.segment(t));
            s1 - s0 == 1 || dominates_by(s1 - s0, t1 - t0, |i| a[s0 + i].val, |j| b[t0 + j].val)
        })
    }
}

/// Classes of equal model, each holding indices into `keyed`.
fn model_classes(keyed: &[Keyed]) -> Vec<Vec<usize>> {
    let mut by_hash: FxHashMap<u64, Vec<usize>> = FxHashMap::default();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keyed.iter().enumerate() {
        let slot = by_hash.entry(k.hash).or_default();
        match slot.iter().find(|&&c| keyed[classes[c][0]].same_model(k)) {
            Some(&c) => classes[c].push(i),
            None => {
                slot.push(classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes
}

/// Deduplicates, then keeps per model the minimal profiles. The result is
/// ordered by tag, and of equivalent sequences the one with the least tag
/// survives.
fn prune_with<T: Copy + Ord>(mut cands: Vec<(BSequence, T)>, unique: bool) -> Vec<(BSequence, T)> {
    cands.sort_unstable_by_key(|c| c.1);
    if !unique {
        let mut seen = FxHashSet::default();
        let fresh: Vec<bool> = cands.iter().map(|(s, _)| seen.insert(s)).collect();
        drop(seen);
        let mut it = fresh.into_iter();
        cands.retain(|_| it.next().unwrap());
    }
    let keyed: Vec<Keyed> = cands.iter().map(|(s, _)| Keyed::new(s)).collect();
    let mut keep = Vec::new();
    for class in model_classes(&keyed) {
        let mut kept: Vec<usize> = Vec::new();
        for i in class {
            if kept.iter().any(|&k| keyed[k].dominates(&keyed[i])) {
                continue;
            }
            kept.retain(|&k| !keyed[i].dominates(&keyed[k]));
            kept.push(i);
        }
        keep.extend(kept);
    }
    drop(keyed);
    keep.sort_unstable();
    let mut it = keep.into_iter().peekable();
    cands
        .into_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            (it.peek() == Some(&i)).then(|| {
                it.next();
                c
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub decomposition: PathDecomposition,
    pub width: usize,
}

/// Sizes after one phase (an introduce plus the forgets that follow it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepStats {
    pub phase: usize,
    pub introduced: usize,
    pub forgotten: Vec<usize>,
    pub boundary: usize,
    pub candidates: usize,
    pub entries: usize,
    pub max_len: usize,
    pub total_len: usize,
}

impl StepStats {
    pub const TSV_HEADER: &'static str = "phase\tintroduced\tforgotten\tboundary\tcandidates\tentries\tmax_len\ttotal_len";

    /// One TSV row; vertices are 1-based.
    pub fn tsv(&self) -> String {
        let forgotten: Vec<String> = self.forgotten.iter().map(|v| (v + 1).to_string()).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.phase,
            self.introduced + 1,
            if forgotten.is_empty() { "-".to_string() } else { forgotten.join(",") },
            self.boundary,
            self.candidates,
            self.entries,
            self.max_len,
            self.total_len
        )
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Answer `w >= n - 1` directly with the single-bag decomposition.
    pub trivial_bound: bool,
    /// Answer NO directly when `w` is below the pathwidth (graphs with at most
    /// `LOWER_BOUND_CAP` vertices).
    pub lower_bound: bool,
    /// Answer YES directly when a greedy connected vertex order already has
    /// width at most `w`.
    pub upper_bound: bool,
    /// Re-check the domination-set invariants after every phase.
    pub check_invariants: bool,
    /// Re-encode the witness sketch at every replayed phase.
    pub check_replay: bool,
    pub trace: bool,
}

pub const LOWER_BOUND_CAP: usize = 20;

impl Options {
    /// Everything decided by the dynamic program, with all checks on.
    pub fn strict() -> Self {
        Options {
            trivial_bound: false,
            lower_bound: false,
            upper_bound: false,
            check_invariants: true,
            check_replay: true,
            trace: false,
        }
    }
}

impl Default for Options {
    fn default() -> Self {
        Options {
            trivial_bound: true,
            lower_bound: true,
            upper_bound: true,
            check_invariants: cfg!(debug_assertions),
            check_replay: cfg!(debug_assertions),
            trace: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub feasible: bool,
    pub witness: Option<Witness>,
    pub trace: Vec<StepStats>,
    /// Whether the answer came from the dynamic program rather than a bound.
    pub by_dp: bool,
}

/// One phase: introduce `v` into label `slot`, then keep only `keep`.
#[derive(Clone, Debug)]
struct Phase {
    v: usize,
    slot: usize,
    xs: LabelSet,
    keep: LabelSet,
    first: bool,
}

fn check_input(g: &Graph, q: &PathDecomposition) -> Result<(), DpError> {
    if g.n() == 0 {
        return Err(DpError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(DpError::Disconnected);
    }
    validate(g, q)?;
    Ok(())
}

pub fn decide_cpw(g: &Graph, q: &PathDecomposition, w: usize) -> Result<Decision, DpError> {
    decide_cpw_with(g, q, w, &Options::default())
}

pub fn decide_cpw_with(g: &Graph, q: &PathDecomposition, w: usize, opts: &Options) -> Result<Decision, DpError> {
    check_input(g, q)?;
    let n = g.n();
    let by_bound = |feasible: bool| {
        let witness = feasible.then(|| Witness { decomposition: PathDecomposition::new(vec![g.vertex_set()]), width: n - 1 });
        Ok(Decision { feasible, witness, trace: vec![], by_dp: false })
    };
    if opts.trivial_bound && w + 1 >= n {
        return by_bound(true);
    }
    if opts.lower_bound && n <= LOWER_BOUND_CAP && w < exact_pathwidth(g)?.0 {
        return by_bound(false);
    }
    if opts.upper_bound {
        if let Some((k, p)) = greedy_connected_decomposition(g).filter(|(k, _)| *k <= w) {
            let witness = Some(Witness { decomposition: p, width: k });
            return Ok(Decision { feasible: true, witness, trace: vec![], by_dp: false });
        }
    }
    let budget = u32::try_from(w + 1).map_err(|_| DpError::Budget)?;

    // Group the nice steps into phases.
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for step in make_nice(q)? {
        match (step.kind, groups.last_mut()) {
            (StepKind::Introduce(v), _) => groups.push((v, vec![])),
            (StepKind::Forget(u), Some(last)) => last.1.push(u),
            (StepKind::Forget(_), None) => return Err(DpError::Internal("forget before any introduce".into())),
        }
    }

    let mut slot_of = vec![usize::MAX; n];
    let mut introduced = vec![false; n];
    let mut boundary = LabelSet::EMPTY;
    let mut history: Vec<(Phase, Vec<Provenance>)> = Vec::with_capacity(groups.len());
    let mut trace = Vec::new();
    let mut d: Option<DominationSet> = None;

    for (i, (v, forgets)) in groups.iter().enumerate() {
        let v = *v;
        let mut xs = LabelSet::EMPTY;
        for &u in g.neighbors(v) {
            if introduced[u] {
                if slot_of[u] == usize::MAX {
                    return Err(DpError::Internal(format!("neighbour {u} of {v} already forgotten")));
                }
                xs = xs.with(slot_of[u]);
            }
        }
        let slot = (!boundary.0).trailing_zeros() as usize;
        if slot >= MAX_LABELS {
            return Err(DpError::TooWide(MAX_LABELS + 1));
        }
        slot_of[v] = slot;
        introduced[v] = true;
        let mut keep = boundary.with(slot);
        for &u in forgets {
            keep = keep.without(slot_of[u]);
            slot_of[u] = usize::MAX;
        }
        let phase = Phase { v, slot, xs, keep, first: d.is_none() };
        let cands = match &d {
            None => {
                // The other three initial sequences only add blank ends.
                let mut init = initial_dset(slot, budget)?;
                init.entries.truncate(1);
                init.trimmed = true;
                restrict_all(&init, keep, |_| Provenance::Initial(0))
            }
            Some(cur) => expand(cur, slot, xs, keep),
        };
        let generated = cands.generated;
        let next = finish(budget, keep, cands, true);
        boundary = keep;
        if opts.check_invariants {
            next.check_invariants()?;
        }
        if opts.trace {
            trace.push(StepStats {
                phase: i + 1,
                introduced: v,
                forgotten: forgets.clone(),
                boundary: keep.len(),
                candidates: generated,
                entries: next.len(),
                max_len: next.entries.iter().map(BSequence::len).max().unwrap_or(0),
                total_len: next.entries.iter().map(BSequence::len).sum(),
            });
        }
        history.push((phase, next.provenance.clone()));
        let empty = next.is_empty();
        d = Some(next);
        if empty {
            return Ok(Decision { feasible: false, witness: None, trace, by_dp: true });
        }
    }
    let d = d.ok_or_else(|| DpError::Internal("no steps".into()))?;
    if !d.boundary.is_empty() {
        return Err(DpError::Internal("boundary not emptied".into()));
    }
    let witness = reconstruct(g, &history, &d.entries[0], 0, w, opts.check_replay)?;
    Ok(Decision { feasible: true, witness: Some(witness), trace, by_dp: true })
}

/// A concrete bag sequence together with the positions its representative
/// keeps.
struct Sketch {
    seq: BSequence,
    bags: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

impl Sketch {
    /// Keeps the representative of `seq`, whose positions map to bags via
    /// `pos`, minus its blank ends (whose bags are dropped).
    fn keep(&mut self, seq: BSequence, pos: Vec<usize>) -> Result<(), DpError> {
        let idx = seq.rep_indices();
        let (a, b) = trim_range_by(&idx, seq.elements());
        let mut drop: Vec<usize> = idx[..a].iter().chain(&idx[b..]).map(|&j| pos[j]).collect();
        if drop.iter().any(|&i| !self.bags[i].is_empty()) {
            return Err(DpError::Internal("trimmed a nonempty bag".into()));
        }
        drop.sort_unstable();
        let shift = |i: usize| i - drop.partition_point(|&d| d < i);
        self.pos = idx[a..b].iter().map(|&j| shift(pos[j])).collect();
        self.seq = seq.pick(&idx[a..b]);
        for &i in drop.iter().rev() {
            self.bags.remove(i);
        }
        Ok(())
    }

    fn pad(&mut self) {
        self.seq = self.seq.padded();
        self.bags.insert(0, vec![]);
        self.bags.push(vec![]);
        let last = self.bags.len() - 1;
        self.pos = std::iter::once(0).chain(self.pos.iter().map(|&p| p + 1)).chain(std::iter::once(last)).collect();
    }
}

fn reconstruct(
    g: &Graph,
    history: &[(Phase, Vec<Provenance>)],
    last: &BSequence,
    last_index: usize,
    w: usize,
    check: bool,
) -> Result<Witness, DpError> {
    let broken = |m: &str| DpError::Internal(format!("broken provenance chain: {m}"));
    let mut chain = Vec::with_capacity(history.len());
    let mut idx = last_index;
    for (_, prov) in history.iter().rev() {
        let p = *prov.get(idx).ok_or_else(|| broken("index out of range"))?;
        chain.push(p);
        idx = match p {
            Provenance::Initial(_) => 0,
            Provenance::Insert { parent, .. } | Provenance::Forget { parent } => parent,
        };
    }
    chain.reverse();

    let mut sk: Option<Sketch> = None;
    let mut slot_vertex = [usize::MAX; MAX_LABELS];
    let mut seen = VertexSet::with_capacity(g.n());
    for ((ph, _), p) in history.iter().zip(chain) {
        match (p, sk.as_mut()) {
            (Provenance::Initial(0), None) if ph.first => {
                let seq = initial_sequences(ph.slot)[0].clone();
                let mut s = Sketch { seq: seq.clone(), bags: vec![vec![ph.v]], pos: vec![0] };
                s.keep(seq.project_unchecked(ph.keep), vec![0])?;
                sk = Some(s);
            }
            (Provenance::Insert { f, l, dup_f, dup_l, .. }, Some(s)) if !ph.first => {
                s.pad();
                let (ext, fx, lx) = extension(&s.seq, f, l, dup_f, dup_l);
                let copies = |j: usize| 1 + (dup_f && j == f) as usize + (dup_l && j == l) as usize;
                let mut bags = Vec::with_capacity(s.bags.len() + 2);
                let mut ext_pos = Vec::with_capacity(ext.len());
                let mut next_rep = 0;
                for (b, bag) in s.bags.iter().enumerate() {
                    let reps = if s.pos.get(next_rep) == Some(&b) {
                        next_rep += 1;
                        copies(next_rep - 1)
                    } else {
                        0
                    };
                    for _ in 0..reps {
                        ext_pos.push(bags.len());
                        bags.push(bag.clone());
                    }
                    if reps == 0 {
                        bags.push(bag.clone());
                    }
                }
                if ext_pos.len() != ext.len() {
                    return Err(broken("extension does not match the sketch"));
                }
                for bag in &mut bags[ext_pos[fx]..=ext_pos[lx]] {
                    bag.push(ph.v);
                }
                s.bags = bags;
                let ins = ext.insert_unchecked(ph.slot, ph.xs, fx, lx);
                s.keep(ins.project_unchecked(ph.keep), ext_pos)?;
            }
            _ => return Err(broken("routine mismatch")),
        }
        slot_vertex[ph.slot] = ph.v;
        seen.insert(ph.v);
        for l in 0..MAX_LABELS {
            if !ph.keep.contains(l) {
                slot_vertex[l] = usize::MAX;
            }
        }
        if check {
            check_sketch(g, sk.as_ref().unwrap(), &slot_vertex, &seen)?;
        }
    }
    let s = sk.ok_or_else(|| broken("empty history"))?;
    if &s.seq != last {
        return Err(DpError::Internal("replayed sequence differs from the stored entry".into()));
    }
    let decomposition = PathDecomposition::new(
        s.bags.iter().filter(|b| !b.is_empty()).map(|b| b.iter().copied().collect()).collect(),
    );
    let width = validate(g, &decomposition)
        .map_err(|e| DpError::Internal(format!("witness does not validate: {e}")))?;
    if width > w || !is_connected_decomposition(g, &decomposition, &VertexSet::new()) {
        return Err(DpError::Internal(format!("witness has width {width} or a disconnected prefix")));
    }
    Ok(Witness { decomposition, width })
}

/// Checks that the sketch's bags encode to the stored sequence.
fn check_sketch(g: &Graph, s: &Sketch, slot_vertex: &[usize], seen: &VertexSet) -> Result<(), DpError> {
    let (h, ids) = induced(g, seen);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in ids.iter().enumerate() {
        local[v] = i;
    }
    let boundary: VertexSet = s.seq.boundary().iter().map(|l| local[slot_vertex[l]]).collect();
    let p = PathDecomposition::new(s.bags.iter().map(|b| b.iter().map(|&v| local[v]).collect()).collect());
    let bg = BoundariedGraph { graph: h, boundary };
    let (enc, labels) = encode(&bg, &p).map_err(|e| DpError::Internal(format!("sketch is invalid: {e}")))?;
    let rank = |l: usize| labels.iter().position(|&u| u == local[slot_vertex[l]]).unwrap();
    let ours = s.seq.relabel(rank);
    if enc.pick(&s.pos) != ours {
        return Err(DpError::Internal(format!("sketch encodes to\n{}but the entry is\n{}", enc.pick(&s.pos), ours)));
    }
    Ok(())
}

/// Smallest `w` with a connected path-decomposition of width `w`.
pub fn compute_cpw(g: &Graph) -> Result<(usize, Witness), DpError> {
    compute_cpw_with(g, None, &Options::default())
}

/// As `compute_cpw`; with a supplied decomposition the search starts at 0
/// instead of at the exact pathwidth.
pub fn compute_cpw_with(
    g: &Graph,
    q: Option<&PathDecomposition>,
    opts: &Options,
) -> Result<(usize, Witness), DpError> {
    if g.n() == 0 {
        return Err(DpError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(DpError::Disconnected);
    }
    let (start, q) = match q {
        Some(q) => (0, q.clone()),
        None => exact_pathwidth(g)?,
    };
    for w in start..g.n() {
        let d = decide_cpw_with(g, &q, w, opts)?;
        if let Some(wit) = d.witness {
            return Ok((w, wit));
        }
    }
    Err(DpError::Internal("no width below n succeeded".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn strict() -> Options {
        Options::strict()
    }

    fn decide(g: &Graph, w: usize) -> bool {
        let (_, q) = exact_pathwidth(g).unwrap();
        decide_cpw_with(g, &q, w, &strict()).unwrap().feasible
    }

    #[test]
    fn initial_set() {
        let d = initial_dset(0, 1).unwrap();
        assert_eq!(d.len(), 4);
        d.check_invariants().unwrap();
        assert!(d.entries().iter().all(|s| s.width() == 1 && s.is_connected()));
        assert_eq!(initial_dset(0, 0).unwrap_err(), DpError::Budget);
    }

    #[test]
    fn forget_initial() {
        let d = forget_routine(&initial_dset(0, 1).unwrap(), 0).unwrap();
        let e = |v| BElement::new(LabelSet::EMPTY, NearPartition::lone_empty(), v);
        let padded = BSequence::new(LabelSet::EMPTY, vec![e(0), e(1), e(0)]).unwrap();
        assert_eq!(d.entries(), &[padded]);
        assert!(forget_routine(&d, 0).is_err());
    }

    #[test]
    fn insert_edge() {
        let d = insert_routine(&initial_dset(0, 2).unwrap(), 1, [0].into()).unwrap();
        assert!(!d.is_empty());
        assert!(d.entries().iter().any(|s| s.elements().iter().any(|e| e.bd == [0, 1].into() && e.val == 0)));
        let narrow = insert_routine(&initial_dset(0, 1).unwrap(), 1, [0].into()).unwrap();
        assert!(narrow.is_empty());
    }

    #[test]
    fn prune_keeps_minimal() {
        let mk = |v: u32| {
            BSequence::new(LabelSet::EMPTY, vec![
                BElement::new(LabelSet::EMPTY, NearPartition::lone_empty(), 0),
                BElement::new(LabelSet::EMPTY, NearPartition::lone_empty(), v),
                BElement::new(LabelSet::EMPTY, NearPartition::lone_empty(), 0),
            ])
            .unwrap()
        };
        assert_eq!(prune(vec![mk(2)]), vec![mk(2)]);
        assert_eq!(prune(vec![mk(3), mk(2), mk(2)]), vec![mk(2)]);
    }

    #[test]
    fn small_decisions() {
        assert!(decide(&cycle(4), 2));
        assert!(!decide(&cycle(4), 1));
        for n in 2..=8 {
            assert!(decide(&path(n), 1), "P_{n}");
        }
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(decide(&k4, 3));
        assert!(!decide(&k4, 2));
    }

    #[test]
    fn witnesses() {
        let (_, q) = exact_pathwidth(&Graph::new(1)).unwrap();
        let d = decide_cpw_with(&Graph::new(1), &q, 0, &strict()).unwrap();
        assert_eq!(d.witness.unwrap().decomposition, PathDecomposition::from_vecs(&[vec![0]]));
        let (_, q) = exact_pathwidth(&path(3)).unwrap();
        let wit = decide_cpw_with(&path(3), &q, 1, &strict()).unwrap().witness.unwrap();
        assert_eq!(wit.width, 1);
    }

    #[test]
    fn computed_values() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(compute_cpw(&star).unwrap().0, 1);
        assert_eq!(compute_cpw(&cycle(5)).unwrap().0, 2);
        assert_eq!(compute_cpw(&Graph::new(2)).unwrap_err(), DpError::Disconnected);
    }
}
