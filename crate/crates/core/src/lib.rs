//! Exact connected pathwidth.
//!
//! `decide_cpw` runs a dynamic program over a nice path-decomposition whose
//! states are domination sets of boundaried sequences; `compute_cpw` searches
//! the smallest feasible width. The `oracle` module gives brute-force answers
//! for small graphs.

pub mod bseq;
pub mod decomp;
pub mod dp;
pub mod graph;
pub mod intseq;
pub mod oracle;
pub mod search;

pub use bseq::{coarser, encode, BElement, BSeqError, BSequence, Breakpoints, LabelSet, Model, NearPartition};
pub use decomp::{
    exact_pathwidth, format_decomposition, greedy_connected_decomposition, is_connected_decomposition,
    layout_decomposition, make_nice, parse_decomposition, validate,
    DecompositionError, NiceStep, PathDecomposition, StepKind,
};
pub use dp::{
    compute_cpw, compute_cpw_with, decide_cpw, decide_cpw_with, forget_routine, initial_dset, insert_routine, prune,
    Decision, DominationSet, DpError, Options, Witness,
};
pub use graph::{
    apex_augment, components, contract_edge, format_graph, is_connected_boundaried, parse_graph, subdivide_twice,
    BoundariedGraph, Graph, GraphError, VertexSet,
};
pub use intseq::{dominates_int, dominates_profile, tseq, Typical};
pub use oracle::{oracle_cpw, oracle_cpw_layout, oracle_pw};
pub use search::{mces, mcns};
