use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::tree::{VertexId, WeightedTree};

const OPEN: i64 = i64::MIN;
const CLOSE: i64 = i64::MIN + 1;

/// Centre vertices (one or two) found by peeling leaves.
pub fn centers(t: &WeightedTree) -> Vec<VertexId> {
    let mut alive: BTreeSet<VertexId> = t.ids().collect();
    let mut deg: alloc::collections::BTreeMap<VertexId, usize> =
        t.ids().map(|v| (v, t.valence(v))).collect();
    let mut layer: Vec<VertexId> = alive.iter().copied().filter(|v| deg[v] <= 1).collect();
    while alive.len() > 2 {
        let mut next = Vec::new();
        for v in &layer {
            alive.remove(v);
        }
        for v in &layer {
            for u in t.neighbors(*v) {
                if alive.contains(&u) {
                    let d = deg.get_mut(&u).unwrap();
                    *d -= 1;
                    if *d == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    alive.into_iter().collect()
}

fn encode(t: &WeightedTree, v: VertexId, parent: Option<VertexId>) -> Vec<i64> {
    let mut kids: Vec<Vec<i64>> =
        t.neighbors(v).filter(|&u| Some(u) != parent).map(|u| encode(t, u, Some(v))).collect();
    kids.sort();
    let mut out = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
    out.push(OPEN);
    out.push(t.weight(v).unwrap());
    for k in kids {
        out.extend(k);
    }
    out.push(CLOSE);
    out
}

/// A string that is equal for two trees exactly when they are isomorphic
/// as weighted trees (ids ignored).
pub fn canonical_form(t: &WeightedTree) -> Vec<i64> {
    centers(t).into_iter().map(|c| encode(t, c, None)).min().unwrap()
}

pub fn is_isomorphic(a: &WeightedTree, b: &WeightedTree) -> bool {
    a.len() == b.len() && canonical_form(a) == canonical_form(b)
}
