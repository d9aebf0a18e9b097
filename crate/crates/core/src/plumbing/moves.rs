use alloc::vec::Vec;
use core::fmt;

use super::gram::{gram_matrix, is_negative_definite};
use super::tree::{VertexId, WeightedTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveError {
    UnknownVertex(VertexId),
    WrongWeight { vertex: VertexId, expected: i64, found: i64 },
    WrongValence { vertex: VertexId, found: usize },
    LastVertex,
    NotAnEdge(VertexId, VertexId),
    FreeBlowUp,
    NoPositiveLeaf,
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveError::UnknownVertex(v) => write!(f, "no vertex {}", v),
            MoveError::WrongWeight { vertex, expected, found } => {
                write!(f, "vertex {} has weight {}, move needs {}", vertex, found, expected)
            }
            MoveError::WrongValence { vertex, found } => {
                write!(f, "vertex {} has valence {}, not allowed for this move", vertex, found)
            }
            MoveError::LastVertex => f.write_str("cannot remove the only vertex of a tree"),
            MoveError::NotAnEdge(a, b) => write!(f, "{}-{} is not an edge", a, b),
            MoveError::FreeBlowUp => f.write_str("a free blow-up would disconnect the tree"),
            MoveError::NoPositiveLeaf => {
                f.write_str("no leaf of positive weight hangs off a (-1) vertex")
            }
        }
    }
}

/// Where a blow-up happens.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowUpSite {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
    Free,
}

fn weight_of(t: &WeightedTree, v: VertexId) -> Result<i64, MoveError> {
    t.weight(v).ok_or(MoveError::UnknownVertex(v))
}

/// Removes a vertex of weight `sign` (±1) and valence at most 2. Its
/// neighbours lose `sign` from their weights and become adjacent.
pub fn blow_down_signed(t: &WeightedTree, v: VertexId, sign: i64) -> Result<WeightedTree, MoveError> {
    let w = weight_of(t, v)?;
    if w != sign {
        return Err(MoveError::WrongWeight { vertex: v, expected: sign, found: w });
    }
    let val = t.valence(v);
    if val > 2 {
        return Err(MoveError::WrongValence { vertex: v, found: val });
    }
    if t.len() == 1 {
        return Err(MoveError::LastVertex);
    }
    let ns: Vec<VertexId> = t.neighbors(v).collect();
    let mut out = t.clone();
    out.remove_vertex(v);
    for &u in &ns {
        out.set_weight(u, t.weight(u).unwrap() - sign);
    }
    if let [a, b] = ns[..] {
        out.add_edge(a, b);
    }
    Ok(out)
}

pub fn blow_down(t: &WeightedTree, v: VertexId) -> Result<WeightedTree, MoveError> {
    blow_down_signed(t, v, -1)
}

/// Inverse of a blow-down of weight `sign`. The new vertex gets the next
/// free id.
pub fn blow_up_signed(t: &WeightedTree, site: BlowUpSite, sign: i64) -> Result<WeightedTree, MoveError> {
    let x = t.next_id();
    let mut out = t.clone();
    match site {
        BlowUpSite::Free => return Err(MoveError::FreeBlowUp),
        BlowUpSite::Vertex(v) => {
            let w = weight_of(t, v)?;
            out.add_vertex(x, sign);
            out.add_edge(v, x);
            out.set_weight(v, w + sign);
        }
        BlowUpSite::Edge(a, b) => {
            if !t.is_adjacent(a, b) {
                return Err(MoveError::NotAnEdge(a, b));
            }
            out.remove_edge(a, b);
            out.add_vertex(x, sign);
            out.add_edge(a, x);
            out.add_edge(x, b);
            out.set_weight(a, t.weight(a).unwrap() + sign);
            out.set_weight(b, t.weight(b).unwrap() + sign);
        }
    }
    Ok(out)
}

pub fn blow_up(t: &WeightedTree, site: BlowUpSite) -> Result<WeightedTree, MoveError> {
    blow_up_signed(t, site, -1)
}

/// Replaces a weight-0 vertex of valence 2 and its two neighbours by one
/// vertex carrying the sum of the neighbours' weights. The merged vertex
/// keeps the smaller of the two neighbour ids.
pub fn absorb_zero(t: &WeightedTree, v: VertexId) -> Result<WeightedTree, MoveError> {
    let w = weight_of(t, v)?;
    if w != 0 {
        return Err(MoveError::WrongWeight { vertex: v, expected: 0, found: w });
    }
    let ns: Vec<VertexId> = t.neighbors(v).collect();
    let [a, b] = ns[..] else {
        return Err(MoveError::WrongValence { vertex: v, found: ns.len() });
    };
    let (keep, gone) = (a.min(b), a.max(b));
    let mut out = t.clone();
    let moved: Vec<VertexId> = t.neighbors(gone).filter(|&u| u != v).collect();
    out.remove_vertex(v);
    out.remove_vertex(gone);
    out.set_weight(keep, t.weight(a).unwrap() + t.weight(b).unwrap());
    for u in moved {
        out.add_edge(keep, u);
    }
    Ok(out)
}

/// Finds the lowest-id leaf of weight N ≥ 1 whose neighbour has weight −1.
pub fn positive_leaf(t: &WeightedTree) -> Option<VertexId> {
    t.vertices().find_map(|(v, w)| {
        if w >= 1 && t.valence(v) == 1 {
            let u = t.neighbors(v).next().unwrap();
            (t.weight(u) == Some(-1)).then_some(v)
        } else {
            None
        }
    })
}

/// Turns the leaf (N) and its (−1) neighbour into a chain of N (−2)'s:
/// N−1 edge blow-ups walking towards the leaf, then a (+1) blow-down of
/// the leaf.
pub fn flatten_positive_leaf_at(t: &WeightedTree, leaf: VertexId) -> Result<WeightedTree, MoveError> {
    let n = weight_of(t, leaf)?;
    if n < 1 || t.valence(leaf) != 1 {
        return Err(MoveError::NoPositiveLeaf);
    }
    let mut near = t.neighbors(leaf).next().unwrap();
    if t.weight(near) != Some(-1) {
        return Err(MoveError::NoPositiveLeaf);
    }
    let mut cur = t.clone();
    for _ in 1..n {
        let x = cur.next_id();
        cur = blow_up(&cur, BlowUpSite::Edge(near, leaf))?;
        near = x;
    }
    blow_down_signed(&cur, leaf, 1)
}

pub fn flatten_positive_leaf(t: &WeightedTree) -> Result<WeightedTree, MoveError> {
    let leaf = positive_leaf(t).ok_or(MoveError::NoPositiveLeaf)?;
    flatten_positive_leaf_at(t, leaf)
}

/// One step of the reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    Flatten(VertexId),
    Absorb(VertexId),
    BlowDown(VertexId),
}

impl Move {
    pub fn apply(&self, t: &WeightedTree) -> Result<WeightedTree, MoveError> {
        match *self {
            Move::Flatten(v) => flatten_positive_leaf_at(t, v),
            Move::Absorb(v) => absorb_zero(t, v),
            Move::BlowDown(v) => blow_down(t, v),
        }
    }
}

/// Every reducing move available on `t`, in priority order: flattenings,
/// then 0-absorptions, then (−1) blow-downs, each by ascending id.
pub fn applicable_moves(t: &WeightedTree) -> Vec<Move> {
    let mut out = Vec::new();
    for (v, w) in t.vertices() {
        let val = t.valence(v);
        if w >= 1 && val == 1 {
            let u = t.neighbors(v).next().unwrap();
            if t.weight(u) == Some(-1) {
                out.push(Move::Flatten(v));
            }
        }
        if w == 0 && val == 2 {
            out.push(Move::Absorb(v));
        }
        if w == -1 && val <= 2 && t.len() > 1 {
            out.push(Move::BlowDown(v));
        }
    }
    out.sort();
    out
}

pub fn next_move(t: &WeightedTree) -> Option<Move> {
    applicable_moves(t).into_iter().next()
}

/// Applies moves until none is available, choosing among the applicable
/// ones with `choose` (which receives the prioritized list and returns an
/// index). Returns the terminal tree and the moves taken.
///
/// Termination: every move strictly lowers (positive index, vertex count)
/// lexicographically. Flattening and absorption each drop the positive
/// index by one; a (−1) blow-down keeps it and removes a vertex.
pub fn normalize_with<F>(t: &WeightedTree, mut choose: F) -> (WeightedTree, Vec<Move>)
where
    F: FnMut(&[Move]) -> usize,
{
    let mut cur = t.clone();
    let mut log = Vec::new();
    loop {
        let moves = applicable_moves(&cur);
        if moves.is_empty() {
            return (cur, log);
        }
        let m = moves[choose(&moves)];
        cur = m.apply(&cur).expect("applicable move applies");
        log.push(m);
    }
}

pub fn normalize(t: &WeightedTree) -> WeightedTree {
    normalize_with(t, |_| 0).0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceError {
    /// No move applies and the form is still not negative definite.
    NotNegativeDefinite(WeightedTree),
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::NotNegativeDefinite(t) => {
                write!(f, "no negative-definite normal form; reduction stops at {}", t)
            }
        }
    }
}

/// Normal form of a plumbing, required to be negative definite.
pub fn reduce(t: &WeightedTree) -> Result<WeightedTree, ReduceError> {
    let r = normalize(t);
    if is_negative_definite(&gram_matrix(&r)) {
        Ok(r)
    } else {
        Err(ReduceError::NotNegativeDefinite(r))
    }
}
