//! Weighted plumbing trees, their intersection forms, and the calculus
//! moves (blow-ups, blow-downs, 0-absorption, positive-leaf flattening).

mod gram;
mod iso;
mod moves;
mod tree;

pub use gram::{
    det_exact, gram_matrix, inertia, is_negative_definite, leading_minors, GramError, GramMatrix,
    Inertia,
};
pub use iso::{canonical_form, centers, is_isomorphic};
pub use moves::{
    absorb_zero, applicable_moves, blow_down, blow_down_signed, blow_up, blow_up_signed,
    flatten_positive_leaf, flatten_positive_leaf_at, next_move, normalize, normalize_with,
    positive_leaf, reduce, BlowUpSite, Move, MoveError, ReduceError,
};
pub use tree::{TreeError, VertexId, WeightedTree};
