use alloc::vec::Vec;

use super::EmbeddingMatrix;
use crate::plumbing::GramMatrix;

/// Every vector of Zʳ with the given squared length.
fn vectors_of_norm(r: usize, norm: i64) -> Vec<Vec<i64>> {
    fn go(r: usize, rem: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == r {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut b = 0;
        while (b + 1) * (b + 1) <= rem {
            b += 1;
        }
        for x in -b..=b {
            cur.push(x);
            go(r, rem - x * x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if norm >= 0 {
        go(r, norm, &mut Vec::new(), &mut out);
    }
    out
}

fn walk<F: FnMut(&[Vec<i64>]) -> bool>(
    g: &GramMatrix,
    cands: &[Vec<Vec<i64>>],
    cur: &mut Vec<Vec<i64>>,
    visit: &mut F,
) -> bool {
    let i = cur.len();
    if i == g.dim() {
        return visit(cur);
    }
    for v in &cands[i] {
        let ok = (0..i).all(|j| {
            let dot: i64 = v.iter().zip(&cur[j]).map(|(a, b)| a * b).sum();
            -dot == g.get(i, j)
        });
        if ok {
            cur.push(v.clone());
            let stop = walk(g, cands, cur, visit);
            cur.pop();
            if stop {
                return true;
            }
        }
    }
    false
}

/// Reference decision procedure: every tuple of vectors of the right
/// lengths, no symmetry reduction. Only for tiny instances.
pub fn naive_embedding_exists(g: &GramMatrix, r: usize) -> bool {
    let cands: Vec<_> = (0..g.dim()).map(|i| vectors_of_norm(r, -g.get(i, i))).collect();
    walk(g, &cands, &mut Vec::new(), &mut |_| true)
}

/// Every embedding (not up to isometry) by the same brute force.
pub fn naive_embeddings(g: &GramMatrix, r: usize) -> Vec<EmbeddingMatrix> {
    let cands: Vec<_> = (0..g.dim()).map(|i| vectors_of_norm(r, -g.get(i, i))).collect();
    let mut out = Vec::new();
    walk(g, &cands, &mut Vec::new(), &mut |vs| {
        out.push(EmbeddingMatrix::new(r, vs.to_vec()).unwrap());
        false
    });
    out
}
