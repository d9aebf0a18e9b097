use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    Empty,
    DuplicateVertex(VertexId),
    UnknownVertex(VertexId),
    SelfLoop(VertexId),
    DuplicateEdge(VertexId, VertexId),
    NotATree,
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Empty => f.write_str("a plumbing tree needs at least one vertex"),
            TreeError::DuplicateVertex(v) => write!(f, "vertex {} listed twice", v),
            TreeError::UnknownVertex(v) => write!(f, "edge references unknown vertex {}", v),
            TreeError::SelfLoop(v) => write!(f, "self-loop at vertex {}", v),
            TreeError::DuplicateEdge(a, b) => write!(f, "edge {}-{} listed twice", a, b),
            TreeError::NotATree => f.write_str("edges do not form a tree"),
        }
    }
}

/// A plumbing tree: integer weights (Euler numbers) on the vertices of a
/// finite tree. Vertices are kept in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    weights: BTreeMap<VertexId, i64>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl WeightedTree {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, TreeError>
    where
        V: IntoIterator<Item = (VertexId, i64)>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut t = WeightedTree { weights: BTreeMap::new(), adj: BTreeMap::new() };
        for (v, w) in vertices {
            if t.weights.insert(v, w).is_some() {
                return Err(TreeError::DuplicateVertex(v));
            }
            t.adj.insert(v, BTreeSet::new());
        }
        if t.weights.is_empty() {
            return Err(TreeError::Empty);
        }
        for (a, b) in edges {
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            for v in [a, b] {
                if !t.weights.contains_key(&v) {
                    return Err(TreeError::UnknownVertex(v));
                }
            }
            if !t.adj.get_mut(&a).unwrap().insert(b) {
                return Err(TreeError::DuplicateEdge(a.min(b), a.max(b)));
            }
            t.adj.get_mut(&b).unwrap().insert(a);
        }
        t.validate()?;
        Ok(t)
    }

    pub fn single(weight: i64) -> Self {
        WeightedTree::new([(VertexId(0), weight)], []).unwrap()
    }

    /// A linear chain with ids `0..weights.len()` in order.
    pub fn path(weights: &[i64]) -> Self {
        let vs = weights.iter().enumerate().map(|(i, &w)| (VertexId(i as u32), w));
        let es = (1..weights.len()).map(|i| (VertexId(i as u32 - 1), VertexId(i as u32)));
        WeightedTree::new(vs, es).expect("non-empty chain")
    }

    pub(crate) fn validate(&self) -> Result<(), TreeError> {
        if self.weights.is_empty() {
            return Err(TreeError::Empty);
        }
        let edge_count: usize = self.adj.values().map(|s| s.len()).sum::<usize>() / 2;
        if edge_count + 1 != self.weights.len() {
            return Err(TreeError::NotATree);
        }
        let start = *self.weights.keys().next().unwrap();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[&v] {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        if seen.len() != self.weights.len() {
            return Err(TreeError::NotATree);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.weights.contains_key(&v)
    }

    pub fn weight(&self, v: VertexId) -> Option<i64> {
        self.weights.get(&v).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.weights.keys().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, i64)> + '_ {
        self.weights.iter().map(|(&v, &w)| (v, w))
    }

    /// Each edge once, as `(smaller, larger)`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// One more than the largest id in use.
    pub fn next_id(&self) -> VertexId {
        VertexId(self.weights.keys().next_back().map_or(0, |v| v.0 + 1))
    }

    pub fn total_weight(&self) -> i64 {
        self.weights.values().sum()
    }

    /// Renumbers vertices so that `order[i]` becomes `VertexId(i)`.
    pub fn relabel(&self, order: &[VertexId]) -> Result<WeightedTree, TreeError> {
        let mut index = BTreeMap::new();
        for (i, &v) in order.iter().enumerate() {
            if !self.contains(v) {
                return Err(TreeError::UnknownVertex(v));
            }
            if index.insert(v, VertexId(i as u32)).is_some() {
                return Err(TreeError::DuplicateVertex(v));
            }
        }
        if index.len() != self.len() {
            return Err(TreeError::NotATree);
        }
        WeightedTree::new(
            self.vertices().map(|(v, w)| (index[&v], w)),
            self.edges().map(|(a, b)| (index[&a], index[&b])),
        )
    }

    /// Renumbers vertices to `0..len` keeping their relative order.
    pub fn compacted(&self) -> WeightedTree {
        let order: Vec<_> = self.ids().collect();
        self.relabel(&order).expect("a permutation of the ids")
    }

    /// Distance from `v` to the farthest vertex.
    pub fn eccentricity(&self, v: VertexId) -> usize {
        let mut dist = BTreeMap::new();
        dist.insert(v, 0usize);
        let mut queue = VecDeque::from([v]);
        let mut far = 0;
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            far = far.max(d);
            for u in self.neighbors(x) {
                if let alloc::collections::btree_map::Entry::Vacant(e) = dist.entry(u) {
                    e.insert(d + 1);
                    queue.push_back(u);
                }
            }
        }
        far
    }

    // Mutation helpers for the calculus moves. Callers restore the tree
    // invariant before handing the value out.

    pub(crate) fn set_weight(&mut self, v: VertexId, w: i64) {
        *self.weights.get_mut(&v).expect("vertex exists") = w;
    }

    pub(crate) fn add_vertex(&mut self, v: VertexId, w: i64) {
        self.weights.insert(v, w);
        self.adj.entry(v).or_default();
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        self.weights.remove(&v);
        if let Some(ns) = self.adj.remove(&v) {
            for u in ns {
                self.adj.get_mut(&u).unwrap().remove(&v);
            }
        }
    }

    pub(crate) fn add_edge(&mut self, a: VertexId, b: VertexId) {
        self.adj.get_mut(&a).unwrap().insert(b);
        self.adj.get_mut(&b).unwrap().insert(a);
    }

    pub(crate) fn remove_edge(&mut self, a: VertexId, b: VertexId) {
        self.adj.get_mut(&a).unwrap().remove(&b);
        self.adj.get_mut(&b).unwrap().remove(&a);
    }
}

impl fmt::Display for WeightedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("vertices:")?;
        for (v, w) in self.vertices() {
            write!(f, " {}:{}", v, w)?;
        }
        f.write_str("; edges:")?;
        for (a, b) in self.edges() {
            write!(f, " {}-{}", a, b)?;
        }
        Ok(())
    }
}
