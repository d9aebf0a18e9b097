use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use super::{EmbeddingMatrix, LatticeError, SearchBudget, SearchOutcome};
use crate::plumbing::{det_exact, is_negative_definite, GramMatrix};

/// The order in which vertices receive vectors. Any order gives the same
/// answer; they differ only in speed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VertexOrder {
    /// Largest |weight| first, ties broken by lower eccentricity.
    WeightThenCentrality,
    /// Starts like `WeightThenCentrality`, then always continues with a
    /// neighbour of a placed vertex, best by the same key.
    #[default]
    Connected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub order: VertexOrder,
    /// With r = dim, an embedding writes G = −AᵀA with A square, so |det G|
    /// must be a perfect square. Skip the search when it is not.
    pub square_det_filter: bool,
    pub budget: SearchBudget,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            order: VertexOrder::default(),
            square_det_filter: true,
            budget: SearchBudget::unlimited(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Vectors placed during the search.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// One embedding per orbit of the signed permutation group of Zʳ.
    pub classes: Vec<EmbeddingMatrix>,
    /// Orbits once automorphisms of the Gram matrix may also rename
    /// vertices.
    pub up_to_automorphisms: usize,
    pub nodes: u64,
}

fn neighbours(g: &GramMatrix, i: usize) -> impl Iterator<Item = usize> + '_ {
    (0..g.dim()).filter(move |&j| j != i && g.get(i, j) != 0)
}

fn eccentricity(g: &GramMatrix, s: usize) -> usize {
    let mut dist = vec![usize::MAX; g.dim()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    let mut far = 0;
    while let Some(x) = q.pop_front() {
        far = far.max(dist[x]);
        for y in neighbours(g, x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    far
}

pub fn search_order(g: &GramMatrix, order: VertexOrder) -> Vec<usize> {
    let n = g.dim();
    let key: Vec<(i64, usize, usize)> = (0..n).map(|i| (g.get(i, i), eccentricity(g, i), i)).collect();
    let mut by_key: Vec<usize> = (0..n).collect();
    by_key.sort_by_key(|&i| key[i]);
    match order {
        VertexOrder::WeightThenCentrality => by_key,
        VertexOrder::Connected => {
            let mut placed = vec![false; n];
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let next = by_key
                    .iter()
                    .copied()
                    .filter(|&i| !placed[i] && neighbours(g, i).any(|j| placed[j]))
                    .min_by_key(|&i| key[i])
                    .or_else(|| by_key.iter().copied().find(|&i| !placed[i]))
                    .unwrap();
                placed[next] = true;
                out.push(next);
            }
            out
        }
    }
}

/// A multiset of nonzero coordinate values, as (value, multiplicity) in
/// decreasing value order.
#[derive(Clone, Debug)]
struct Multi {
    items: Vec<(i64, usize)>,
    sum: i64,
    norm: i64,
    count: usize,
}

fn multisets(slots: usize, max_norm: i64, signed: bool) -> Vec<Multi> {
    let mut top = 0;
    while (top + 1) * (top + 1) <= max_norm {
        top += 1;
    }
    let mut values: Vec<i64> = (1..=top).rev().collect();
    if signed {
        values.extend((1..=top).map(|v| -v));
    }
    fn go(
        values: &[i64],
        slots: usize,
        rem: i64,
        cur: &mut Multi,
        out: &mut Vec<Multi>,
    ) {
        let Some((&v, rest)) = values.split_first() else {
            out.push(cur.clone());
            return;
        };
        go(rest, slots, rem, cur, out);
        let mut c = 1;
        while cur.count + c <= slots && (c as i64) * v * v <= rem {
            cur.items.push((v, c));
            cur.sum += c as i64 * v;
            cur.norm += c as i64 * v * v;
            cur.count += c;
            go(rest, slots, rem - c as i64 * v * v, cur, out);
            cur.count -= c;
            cur.norm -= c as i64 * v * v;
            cur.sum -= c as i64 * v;
            cur.items.pop();
            c += 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = Multi { items: Vec::new(), sum: 0, norm: 0, count: 0 };
    go(&values, slots, max_norm, &mut cur, &mut out);
    out
}

/// Columns equal up to sign. `rep` is the column over the placed vertices
/// with its first nonzero entry positive; column c equals signs[c]·rep.
#[derive(Clone, Debug)]
struct Class {
    cols: Vec<usize>,
    rep: Vec<i64>,
    nz: Vec<usize>,
}

struct Searcher<'a> {
    g: &'a GramMatrix,
    order: Vec<usize>,
    r: usize,
    placed: Vec<Vec<i64>>,
    signs: Vec<i64>,
    nodes: u64,
    limit: Option<u64>,
    aborted: bool,
    find_first: bool,
    locally_minimal: bool,
    found: Vec<EmbeddingMatrix>,
    cache: BTreeMap<(usize, i64, bool), Rc<Vec<Multi>>>,
}

struct Level {
    depth: usize,
    b: Vec<i64>,
    last: Vec<usize>,
    rest: Vec<Vec<i64>>,
    lists: Vec<Rc<Vec<Multi>>>,
}

impl<'a> Searcher<'a> {
    fn multis(&mut self, slots: usize, max_norm: i64, signed: bool) -> Rc<Vec<Multi>> {
        let slots = slots.min(max_norm.max(0) as usize);
        self.cache
            .entry((slots, max_norm, signed))
            .or_insert_with(|| Rc::new(multisets(slots, max_norm, signed)))
            .clone()
    }

    fn dfs(&mut self, depth: usize, classes: Vec<Class>, fresh: Vec<usize>) -> bool {
        let n = self.order.len();
        if depth == n {
            let mut vectors = vec![Vec::new(); n];
            for (d, &v) in self.order.iter().enumerate() {
                vectors[v] = self.placed[d].clone();
            }
            let m = EmbeddingMatrix::new(self.r, vectors).unwrap();
            if self.locally_minimal && !m.is_locally_minimal() {
                return false;
            }
            self.found.push(m);
            return self.find_first;
        }
        let t = self.order[depth];
        let norm = -self.g.get(t, t);
        let b: Vec<i64> = (0..depth).map(|i| -self.g.get(t, self.order[i])).collect();
        let mut last = vec![usize::MAX; depth];
        for (k, c) in classes.iter().enumerate() {
            for &i in &c.nz {
                last[i] = k;
            }
        }
        if (0..depth).any(|i| last[i] == usize::MAX && b[i] != 0) {
            return false;
        }
        let mut rest = vec![vec![0i64; depth]; classes.len() + 1];
        for k in (0..classes.len()).rev() {
            rest[k] = rest[k + 1].clone();
            let m = classes[k].cols.len() as i64;
            for &i in &classes[k].nz {
                rest[k][i] += m * classes[k].rep[i] * classes[k].rep[i];
            }
        }
        let lists = classes.iter().map(|c| self.multis(c.cols.len(), norm, true)).collect();
        let level = Level { depth, b, last, rest, lists };
        let mut partial = vec![0i64; depth];
        let mut chosen = Vec::with_capacity(classes.len());
        self.pick(&level, &classes, &fresh, 0, &mut partial, norm, &mut chosen)
    }

    #[allow(clippy::too_many_arguments)]
    fn pick(
        &mut self,
        lv: &Level,
        classes: &[Class],
        fresh: &[usize],
        k: usize,
        partial: &mut Vec<i64>,
        rem: i64,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if k == classes.len() {
            return self.finish(lv, classes, fresh, rem, chosen);
        }
        let list = lv.lists[k].clone();
        let class = &classes[k];
        for (idx, ms) in list.iter().enumerate() {
            if ms.norm > rem {
                continue;
            }
            for &i in &class.nz {
                partial[i] += class.rep[i] * ms.sum;
            }
            let left = rem - ms.norm;
            let ok = (0..lv.depth).all(|i| {
                let need = lv.b[i] - partial[i];
                match lv.last[i] {
                    l if l == usize::MAX => true,
                    l if l <= k => need == 0,
                    _ => need * need <= left * lv.rest[k + 1][i],
                }
            });
            let stop = ok && {
                chosen.push(idx);
                let s = self.pick(lv, classes, fresh, k + 1, partial, left, chosen);
                chosen.pop();
                s
            };
            for &i in &class.nz {
                partial[i] -= class.rep[i] * ms.sum;
            }
            if stop {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn finish(
        &mut self,
        lv: &Level,
        classes: &[Class],
        fresh: &[usize],
        rem: i64,
        chosen: &[usize],
    ) -> bool {
        let depth = lv.depth;
        let options = self.multis(fresh.len(), rem, false);
        for ms in options.iter().filter(|m| m.norm == rem) {
            let mut x = vec![0i64; self.r];
            let mut next = Vec::with_capacity(classes.len() + 2);
            for (k, c) in classes.iter().enumerate() {
                let m = &lv.lists[k][chosen[k]];
                let mut pos = 0;
                let mut group = |y: i64, cnt: usize, x: &mut Vec<i64>| {
                    if cnt == 0 {
                        return;
                    }
                    let cols = c.cols[pos..pos + cnt].to_vec();
                    for &col in &cols {
                        x[col] = self.signs[col] * y;
                    }
                    let mut rep = c.rep.clone();
                    rep.push(y);
                    let mut nz = c.nz.clone();
                    if y != 0 {
                        nz.push(depth);
                    }
                    next.push(Class { cols, rep, nz });
                    pos += cnt;
                };
                for &(y, cnt) in m.items.iter().filter(|(y, _)| *y > 0) {
                    group(y, cnt, &mut x);
                }
                group(0, c.cols.len() - m.count, &mut x);
                for &(y, cnt) in m.items.iter().filter(|(y, _)| *y < 0) {
                    group(y, cnt, &mut x);
                }
            }
            let mut pos = 0;
            for &(y, cnt) in &ms.items {
                let cols = fresh[pos..pos + cnt].to_vec();
                for &col in &cols {
                    x[col] = y;
                    self.signs[col] = 1;
                }
                let mut rep = vec![0i64; depth];
                rep.push(y);
                next.push(Class { cols, rep, nz: vec![depth] });
                pos += cnt;
            }
            let still_fresh = fresh[pos..].to_vec();

            self.nodes += 1;
            if self.limit.is_some_and(|l| self.nodes > l) {
                self.aborted = true;
                return false;
            }
            self.placed.push(x);
            let stop = self.dfs(depth + 1, next, still_fresh);
            self.placed.pop();
            if stop {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        false
    }
}

fn is_perfect_square(d: &num_bigint::BigInt) -> bool {
    let m = d.magnitude();
    let s = m.sqrt();
    &(&s * &s) == m
}

fn run(
    g: &GramMatrix,
    r: usize,
    opts: &SearchOptions,
    find_first: bool,
    locally_minimal: bool,
) -> Result<(Vec<EmbeddingMatrix>, u64, bool), LatticeError> {
    if r == 0 {
        return Err(LatticeError::ZeroRank);
    }
    if !is_negative_definite(g) {
        return Err(LatticeError::NotNegativeDefinite);
    }
    // the image of a rank-dim lattice cannot fit in fewer dimensions
    if r < g.dim() {
        return Ok((Vec::new(), 0, false));
    }
    if opts.square_det_filter && r == g.dim() && !is_perfect_square(&det_exact(g)) {
        return Ok((Vec::new(), 0, false));
    }
    let mut s = Searcher {
        g,
        order: search_order(g, opts.order),
        r,
        placed: Vec::new(),
        signs: vec![1; r],
        nodes: 0,
        limit: opts.budget.node_limit,
        aborted: false,
        find_first,
        locally_minimal,
        found: Vec::new(),
        cache: BTreeMap::new(),
    };
    s.dfs(0, Vec::new(), (0..r).collect());
    Ok((s.found, s.nodes, s.aborted))
}

/// Decides whether G embeds in (Zʳ, −Id). `None` is a proof of
/// non-existence; `Indeterminate` only means the budget ran out.
pub fn find_embedding_with(
    g: &GramMatrix,
    r: usize,
    opts: &SearchOptions,
) -> Result<SearchReport, LatticeError> {
    let (mut found, nodes, aborted) = run(g, r, opts, true, false)?;
    let outcome = match found.pop() {
        Some(m) => SearchOutcome::Found(m),
        None if aborted => SearchOutcome::Indeterminate,
        None => SearchOutcome::None,
    };
    Ok(SearchReport { outcome, nodes })
}

pub fn find_embedding(
    g: &GramMatrix,
    r: usize,
    budget: SearchBudget,
) -> Result<SearchOutcome, LatticeError> {
    let opts = SearchOptions { budget, ..SearchOptions::default() };
    Ok(find_embedding_with(g, r, &opts)?.outcome)
}

/// Permutations p with G[p(i)][p(j)] = G[i][j].
pub fn gram_automorphisms(g: &GramMatrix) -> Vec<Vec<usize>> {
    fn go(g: &GramMatrix, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == g.dim() {
            out.push(cur.clone());
            return;
        }
        for j in 0..g.dim() {
            if used[j] || (0..i).any(|a| g.get(cur[a], j) != g.get(a, i)) || g.get(j, j) != g.get(i, i) {
                continue;
            }
            used[j] = true;
            cur.push(j);
            go(g, cur, used, out);
            cur.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    go(g, &mut Vec::new(), &mut vec![false; g.dim()], &mut out);
    out
}

/// Every embedding up to signed permutations of the target, optionally
/// only the locally minimal ones. Meant for small instances.
pub fn enumerate_embeddings_with(
    g: &GramMatrix,
    r: usize,
    locally_minimal_only: bool,
    opts: &SearchOptions,
) -> Result<Enumeration, LatticeError> {
    let opts = SearchOptions { square_det_filter: false, budget: SearchBudget::unlimited(), ..*opts };
    let (found, nodes, _) = run(g, r, &opts, false, locally_minimal_only)?;
    let classes: BTreeSet<EmbeddingMatrix> = found.iter().map(EmbeddingMatrix::canonical).collect();
    let autos = gram_automorphisms(g);
    let coarse: BTreeSet<EmbeddingMatrix> = classes
        .iter()
        .map(|m| autos.iter().map(|p| m.permuted(p).canonical()).min().unwrap())
        .collect();
    Ok(Enumeration {
        classes: classes.into_iter().collect(),
        up_to_automorphisms: coarse.len(),
        nodes,
    })
}

pub fn enumerate_embeddings(
    g: &GramMatrix,
    r: usize,
    locally_minimal_only: bool,
) -> Result<Vec<EmbeddingMatrix>, LatticeError> {
    Ok(enumerate_embeddings_with(g, r, locally_minimal_only, &SearchOptions::default())?.classes)
}
