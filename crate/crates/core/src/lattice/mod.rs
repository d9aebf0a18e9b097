//! Embeddings of negative definite integer lattices into (Zʳ, −Id).

mod oracle;
mod search;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::plumbing::GramMatrix;

pub use oracle::{naive_embedding_exists, naive_embeddings};
pub use search::{
    enumerate_embeddings, enumerate_embeddings_with, find_embedding, find_embedding_with,
    gram_automorphisms, search_order, Enumeration, SearchOptions, SearchReport, VertexOrder,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    DimensionMismatch { expected: usize, found: usize },
    RaggedVectors,
    ZeroRank,
    NotNegativeDefinite,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::DimensionMismatch { expected, found } => {
                write!(f, "expected {} vectors, found {}", expected, found)
            }
            LatticeError::RaggedVectors => f.write_str("vectors have different lengths"),
            LatticeError::ZeroRank => f.write_str("target rank must be positive"),
            LatticeError::NotNegativeDefinite => f.write_str("Gram matrix is not negative definite"),
        }
    }
}

/// One vector of Zʳ per lattice generator, in Gram matrix order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbeddingMatrix {
    rank: usize,
    vectors: Vec<Vec<i64>>,
}

impl EmbeddingMatrix {
    pub fn new(rank: usize, vectors: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if rank == 0 {
            return Err(LatticeError::ZeroRank);
        }
        if vectors.iter().any(|v| v.len() != rank) {
            return Err(LatticeError::RaggedVectors);
        }
        Ok(EmbeddingMatrix { rank, vectors })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.vectors.iter().map(|v| v[j]).collect()
    }

    /// Every coordinate is used by some vector.
    pub fn is_locally_minimal(&self) -> bool {
        (0..self.rank).all(|j| self.vectors.iter().any(|v| v[j] != 0))
    }

    /// A representative of the orbit under signed permutations of the
    /// coordinates: columns sign-normalized and sorted.
    pub fn canonical(&self) -> EmbeddingMatrix {
        let mut cols: Vec<Vec<i64>> = (0..self.rank)
            .map(|j| {
                let mut c = self.column(j);
                if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    c.iter_mut().for_each(|x| *x = -*x);
                }
                c
            })
            .collect();
        cols.sort_by(|a, b| b.cmp(a));
        let vectors = (0..self.vectors.len())
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        EmbeddingMatrix { rank: self.rank, vectors }
    }

    /// The vectors reordered so that `perm[i]` becomes position i.
    pub fn permuted(&self, perm: &[usize]) -> EmbeddingMatrix {
        EmbeddingMatrix {
            rank: self.rank,
            vectors: perm.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    /// One line per vector, in the e₁,…,e_r basis.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vectors.iter().enumerate() {
            let _ = writeln!(out, "v{} = {}", i, render_vector(v));
        }
        out
    }
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    alloc::format!("{}", n).chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

pub fn render_vector(v: &[i64]) -> String {
    let mut out = String::new();
    for (j, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let sign = if x < 0 { "-" } else { "+" };
        if out.is_empty() {
            if x < 0 {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {} ", sign);
        }
        if x.abs() != 1 {
            let _ = write!(out, "{}", x.abs());
        }
        let _ = write!(out, "e{}", subscript(j + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Checks −vᵢ·vⱼ = G[i][j] for every pair.
pub fn verify_embedding(g: &GramMatrix, m: &EmbeddingMatrix) -> Result<bool, LatticeError> {
    if g.dim() != m.len() {
        return Err(LatticeError::DimensionMismatch { expected: g.dim(), found: m.len() });
    }
    for i in 0..g.dim() {
        for j in i..g.dim() {
            let dot: i64 = m.vectors[i].iter().zip(&m.vectors[j]).map(|(a, b)| a * b).sum();
            if -dot != g.get(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Node limit for a search; `None` means unlimited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SearchBudget {
    pub node_limit: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { node_limit: None }
    }

    pub fn nodes(limit: u64) -> Self {
        SearchBudget { node_limit: Some(limit) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(EmbeddingMatrix),
    None,
    Indeterminate,
}

/// All multisets of positive integers whose squares sum to `m`, each
/// listed in non-increasing order, the list in decreasing lexicographic
/// order.
pub fn square_decompositions(m: u64) -> Vec<Vec<u64>> {
    fn go(rem: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        let mut x = max;
        while x >= 1 {
            if x * x <= rem {
                cur.push(x);
                go(rem - x * x, x, cur, out);
                cur.pop();
            }
            x -= 1;
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut top = 1;
    while (top + 1) * (top + 1) <= m {
        top += 1;
    }
    go(m, top, &mut Vec::new(), &mut out);
    out
}

/// Distinct canonical forms among a list of embeddings.
pub fn isometry_classes<'a, I>(ms: I) -> BTreeSet<EmbeddingMatrix>
where
    I: IntoIterator<Item = &'a EmbeddingMatrix>,
{
    ms.into_iter().map(EmbeddingMatrix::canonical).collect()
}
