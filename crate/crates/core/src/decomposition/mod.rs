//! Decomposition of a quadrangulation into simple blocks and irreducible
//! components, and the detach/glue bijection around one component.

mod components;
mod detach;
pub mod irreducible;
pub mod simple;
#[cfg(test)]
mod tests;

pub use components::{
    brute_force_components, irreducible_components, largest_component, root_block_edges, separation_witness,
    Component, ComponentReport,
};
pub use detach::{component_mass_measure, detach, glue, is_filler, psi_root_edge, Decomposition};
pub use irreducible::irreducible_root_block;
pub use simple::{simple_blocks, simple_root_block, SimpleBlocks};

use crate::map_kernel::{Bicoloring, Dart, MapError, PlanarMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("the submap is not an irreducible quadrangulation")]
    NotIrreducible,
    #[error("expected {expected} fillers, got {got}")]
    FillerCount { expected: usize, got: usize },
    #[error("filler {0} is not admissible: {1}")]
    Filler(usize, &'static str),
    #[error("index {0} is out of range")]
    Index(usize),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A set of edges of a host map, given by their darts, with a root dart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submap {
    /// Sorted, closed under twin.
    pub darts: Vec<Dart>,
    pub root: Dart,
}

impl Submap {
    pub fn from_edges(mut edges: Vec<usize>, root: Dart) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let darts = edges.iter().flat_map(|&e| [2 * e, 2 * e + 1]).collect();
        Submap { darts, root }
    }

    pub fn edges(&self) -> Vec<usize> {
        self.darts.iter().step_by(2).map(|d| d >> 1).collect()
    }

    pub fn to_map(&self, host: &PlanarMap) -> PlanarMap {
        self.to_map_with_labels(host).0
    }

    /// The submap as a map, with the host-to-submap dart table.
    pub fn to_map_with_labels(&self, host: &PlanarMap) -> (PlanarMap, Vec<usize>) {
        host.induced(&self.darts, self.root).expect("a submap is connected")
    }
}

/// Replaces each edge by its outermost parallel on the right of the
/// black-to-white orientation, so every other parallel ends up on the left.
/// The root keeps its orientation.
pub fn rightmost_version(q: &PlanarMap, col: &Bicoloring, darts: &[Dart], root: Dart) -> Submap {
    let mut keep = vec![false; q.darts()];
    for &d in darts {
        keep[d] = true;
    }
    let mut edges = Vec::with_capacity(darts.len() / 2);
    let mut new_root = root;
    for &d in darts.iter().filter(|&&d| d & 1 == 0) {
        let x = if col.is_black(q.origin(d)) { d } else { d ^ 1 };
        let v = q.head(x);
        let mut best = x;
        let mut y = q.prev(x);
        while !keep[y] {
            if q.head(y) == v {
                best = y;
            }
            y = q.prev(y);
        }
        edges.push(best >> 1);
        if root >> 1 == d >> 1 {
            new_root = if root == x { best } else { best ^ 1 };
        }
    }
    Submap::from_edges(edges, new_root)
}
