//! Negative-definite plumbings for integral surgeries on algebraic iterated
//! torus knots, and an exact lattice-embedding search deciding whether
//! Donaldson's theorem obstructs those surgeries from bounding rational
//! homology 4-balls.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and parallel sweeps live in the `ratball` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cabling;
pub mod classify;
pub mod hjcf;
pub mod lattice;
pub mod plumbing;

pub use cabling::{CableTower, Plumbing, Role, SurgerySpec, TowerClass};
pub use classify::{FamilyForm, FamilyPredicate, Verdict};
pub use hjcf::{CoeffSeq, PositiveRational};
pub use lattice::{EmbeddingMatrix, SearchBudget, SearchOutcome};
pub use plumbing::{GramMatrix, VertexId, WeightedTree};
