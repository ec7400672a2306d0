//! Monotone connected search numbers, obtained from connected pathwidth.

use crate::dp::{compute_cpw_with, DpError, Options};
use crate::graph::{subdivide_twice, Graph};

/// Monotone connected node search number: `cpw(g) + 1`.
pub fn mcns(g: &Graph) -> Result<usize, DpError> {
    mcns_with(g, &Options::default())
}

pub fn mcns_with(g: &Graph, opts: &Options) -> Result<usize, DpError> {
    Ok(compute_cpw_with(g, None, opts)?.0 + 1)
}

/// Monotone connected edge search number: cpw of the doubly subdivided graph.
pub fn mces(g: &Graph) -> Result<usize, DpError> {
    mces_with(g, &Options::default())
}

pub fn mces_with(g: &Graph, opts: &Options) -> Result<usize, DpError> {
    Ok(compute_cpw_with(&subdivide_twice(g), None, opts)?.0)
}
