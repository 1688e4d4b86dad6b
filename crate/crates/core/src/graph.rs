//! Immutable simple undirected graphs with stable vertex identities.
//!
//! A [`Graph`] is a value: every structural change goes through a
//! [`GraphBuilder`] and produces a new graph. Vertex ids are never reused
//! inside one lineage, so solutions computed on a reduced graph can always be
//! mapped back to the vertices of the graph it was derived from.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

pub type VertexId = u32;
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Clone, Default)]
pub struct Graph {
    adj: BTreeMap<VertexId, Vec<VertexId>>,
    edges: usize,
    /// Strictly greater than every id ever used in this graph's lineage.
    next_id: VertexId,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges=[", self.n(), self.m())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

impl Graph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Graph on vertices `1..=n` with the given edges.
    ///
    /// Panics on self-loops, duplicate edges or out-of-range endpoints; meant
    /// for tests and generators where the input is known to be valid.
    pub fn from_edges(n: u32, edges: &[(VertexId, VertexId)]) -> Self {
        let mut b = GraphBuilder::new();
        for v in 1..=n {
            b.add_vertex_with_id(v);
        }
        for &(u, v) in edges {
            assert!(
                u >= 1 && u <= n && v >= 1 && v <= n,
                "endpoint out of range"
            );
            assert!(b.add_edge(u, v), "duplicate edge or self-loop {u}-{v}");
        }
        b.build()
    }

    pub fn path(n: u32) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: u32) -> Self {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: u32) -> Self {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges)
    }

    /// Star `K_{1,leaves}` with center 1.
    pub fn star(leaves: u32) -> Self {
        let edges: Vec<_> = (2..=leaves + 1).map(|v| (1, v)).collect();
        Self::from_edges(leaves + 1, &edges)
    }

    /// `K_{a,b}` with sides `1..=a` and `a+1..=a+b`.
    pub fn complete_bipartite(a: u32, b: u32) -> Self {
        let mut edges = Vec::new();
        for u in 1..=a {
            for v in a + 1..=a + b {
                edges.push((u, v));
            }
        }
        Self::from_edges(a + b, &edges)
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i + 1, (i + 1) % 5 + 1));
            edges.push((i + 1, i + 6));
            edges.push((i + 6, (i + 2) % 5 + 6));
        }
        Self::from_edges(10, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn next_id(&self) -> VertexId {
        self.next_id
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Sorted neighbor list. Panics if `v` is not a vertex.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[&v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[&v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj
            .get(&u)
            .is_some_and(|nb| nb.binary_search(&v).is_ok())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.values().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.values().map(Vec::len).max()
    }

    pub fn degree_profile(&self) -> BTreeMap<VertexId, usize> {
        self.adj.iter().map(|(&v, nb)| (v, nb.len())).collect()
    }

    pub fn leaves(&self) -> VertexSet {
        self.adj
            .iter()
            .filter(|(_, nb)| nb.len() == 1)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn isolates(&self) -> VertexSet {
        self.adj
            .iter()
            .filter(|(_, nb)| nb.is_empty())
            .map(|(&v, _)| v)
            .collect()
    }

    /// Open neighborhood of a set, `N(S) = ∪ N(v)`.
    pub fn open_neighborhood(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .flat_map(|&v| self.neighbors(v).iter().copied())
            .collect()
    }

    pub fn builder(&self) -> GraphBuilder {
        GraphBuilder {
            adj: self
                .adj
                .iter()
                .map(|(&v, nb)| (v, nb.iter().copied().collect()))
                .collect(),
            next_id: self.next_id,
        }
    }

    /// Vertex sets of the connected components, ordered by smallest id.
    pub fn component_sets(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([s]);
            seen.insert(s);
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for &w in self.neighbors(u) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Graph> {
        self.component_sets()
            .iter()
            .map(|c| self.induced(c))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_sets().len() <= 1
    }

    /// `G[S]`; ids outside the graph are ignored. The lineage watermark is kept.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let mut adj = BTreeMap::new();
        let mut twice = 0;
        for &v in set {
            if let Some(nb) = self.adj.get(&v) {
                let kept: Vec<_> = nb.iter().copied().filter(|w| set.contains(w)).collect();
                twice += kept.len();
                adj.insert(v, kept);
            }
        }
        Graph {
            adj,
            edges: twice / 2,
            next_id: self.next_id,
        }
    }

    /// `G - S`.
    pub fn without(&self, set: &VertexSet) -> Graph {
        let keep: VertexSet = self.vertices().filter(|v| !set.contains(v)).collect();
        self.induced(&keep)
    }

    /// Disjoint union where every vertex `v` of `other` becomes `v + offset`.
    ///
    /// Returns the union and the correspondence `other id -> new id`. Panics
    /// if the shifted ids collide with ids of `self`.
    pub fn disjoint_union(
        &self,
        other: &Graph,
        offset: VertexId,
    ) -> (Graph, BTreeMap<VertexId, VertexId>) {
        let mut b = self.builder();
        let map: BTreeMap<_, _> = other.vertices().map(|v| (v, v + offset)).collect();
        for &w in map.values() {
            assert!(!b.contains(w), "disjoint_union: id {w} collides");
            b.add_vertex_with_id(w);
        }
        for (u, v) in other.edges() {
            b.add_edge(map[&u], map[&v]);
        }
        b.reserve_ids(other.next_id.saturating_add(offset));
        (b.build(), map)
    }

    /// Checks the structural invariants; used by debug assertions and tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut twice = 0;
        for (&v, nb) in &self.adj {
            if v >= self.next_id {
                return Err(format!("vertex {v} not below watermark {}", self.next_id));
            }
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("neighbors of {v} not strictly sorted"));
                }
            }
            for &w in nb {
                if w == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.has_edge(w, v) {
                    return Err(format!("asymmetric edge {v}-{w}"));
                }
            }
            twice += nb.len();
        }
        if twice != 2 * self.edges {
            return Err("edge count mismatch".into());
        }
        Ok(())
    }
}

/// Single-owner mutable staging area for a new [`Graph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    next_id: VertexId,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[&v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[&v].iter().copied()
    }

    /// Makes sure future fresh ids are at least `watermark`.
    pub fn reserve_ids(&mut self, watermark: VertexId) {
        self.next_id = self.next_id.max(watermark);
    }

    /// Adds a vertex with a fresh id.
    pub fn add_vertex(&mut self) -> VertexId {
        let v = self.next_id;
        self.next_id += 1;
        self.adj.insert(v, BTreeSet::new());
        v
    }

    /// Adds (or keeps) a vertex with an explicit id.
    pub fn add_vertex_with_id(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
        self.next_id = self.next_id.max(v + 1);
    }

    /// Returns `false` for self-loops and already present edges.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if u == v || !self.contains(u) || !self.contains(v) {
            return false;
        }
        if !self.adj.get_mut(&u).unwrap().insert(v) {
            return false;
        }
        self.adj.get_mut(&v).unwrap().insert(u);
        true
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let removed = self.adj.get_mut(&u).is_some_and(|nb| nb.remove(&v));
        if removed {
            self.adj.get_mut(&v).unwrap().remove(&u);
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        match self.adj.remove(&v) {
            Some(nb) => {
                for w in nb {
                    self.adj.get_mut(&w).unwrap().remove(&v);
                }
                true
            }
            None => false,
        }
    }

    /// Replaces `group` by one fresh vertex adjacent to the union of their
    /// neighborhoods outside the group. Loops and parallel edges are dropped.
    pub fn merge(&mut self, group: &VertexSet) -> VertexId {
        let mut outside = BTreeSet::new();
        for &v in group {
            if let Some(nb) = self.adj.get(&v) {
                outside.extend(nb.iter().copied().filter(|w| !group.contains(w)));
            }
        }
        for &v in group {
            self.remove_vertex(v);
        }
        let z = self.add_vertex();
        for w in outside {
            self.add_edge(z, w);
        }
        z
    }

    pub fn build(self) -> Graph {
        let mut edges = 0;
        let adj: BTreeMap<_, Vec<_>> = self
            .adj
            .into_iter()
            .map(|(v, nb)| {
                edges += nb.len();
                (v, nb.into_iter().collect())
            })
            .collect();
        let g = Graph {
            adj,
            edges: edges / 2,
            next_id: self.next_id,
        };
        debug_assert_eq!(g.check_invariants(), Ok(()));
        g
    }
}

/// Index-based view for the inner loops of solvers: vertices are `0..n` in
/// ascending id order.
#[derive(Clone, Debug)]
pub struct Dense {
    pub ids: Vec<VertexId>,
    pub adj: Vec<Vec<usize>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        let ids: Vec<_> = g.vertices().collect();
        let index: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect())
            .collect();
        Dense { ids, adj }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn to_ids(&self, idx: impl IntoIterator<Item = usize>) -> VertexSet {
        idx.into_iter().map(|i| self.ids[i]).collect()
    }

    /// Neighborhood bitmasks; requires `n <= 64`.
    pub fn masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64);
        self.adj
            .iter()
            .map(|nb| nb.iter().fold(0u64, |m, &w| m | 1 << w))
            .collect()
    }

    pub fn mask_of(&self, set: &VertexSet) -> u64 {
        set.iter()
            .filter_map(|&v| self.index_of(v))
            .fold(0u64, |m, i| m | 1 << i)
    }

    pub fn ids_of_mask(&self, mask: u64) -> VertexSet {
        (0..self.n())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.ids[i])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[VertexId]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn degree_classification() {
        let star = Graph::star(3);
        assert_eq!(star.leaves(), set(&[2, 3, 4]));
        assert!(star.isolates().is_empty());

        let mut b = Graph::from_edges(3, &[(1, 2)]).builder();
        b.add_vertex();
        let g = b.build();
        assert_eq!(g.leaves(), set(&[1, 2]));
        assert_eq!(g.isolates(), set(&[3, 4]));

        assert!(Graph::cycle(5).leaves().is_empty());
        assert_eq!(Graph::cycle(5).degree_profile().values().sum::<usize>(), 10);
    }

    #[test]
    fn induced_and_components() {
        let p3 = Graph::cycle(5).induced(&set(&[1, 2, 3]));
        assert_eq!(p3, Graph::path(3));

        let two = Graph::from_edges(4, &[(1, 2), (3, 4)]);
        let comps = two.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.n() == 2 && c.m() == 1));
    }

    #[test]
    fn disjoint_union_correspondence() {
        let c3 = Graph::cycle(3);
        let (u, f) = c3.disjoint_union(&c3, 3);
        assert_eq!(u.n(), 6);
        assert_eq!(u.m(), 6);
        assert_eq!(
            f.into_iter().collect::<Vec<_>>(),
            vec![(1, 4), (2, 5), (3, 6)]
        );
        assert!(u.next_id() >= 7);
    }

    #[test]
    fn merge_assigns_fresh_ids() {
        let g = Graph::path(4);
        let mut b = g.builder();
        let z = b.merge(&set(&[2, 3]));
        let h = b.build();
        assert_eq!(z, 5);
        assert_eq!(h.neighbors(z), &[1, 4]);
        // deleted ids are never handed out again
        let mut b = h.builder();
        b.remove_vertex(z);
        assert_eq!(b.add_vertex(), 6);
    }

    #[test]
    fn builder_rejects_loops_and_duplicates() {
        let mut b = Graph::path(2).builder();
        assert!(!b.add_edge(1, 1));
        assert!(!b.add_edge(2, 1));
        assert!(b.remove_edge(1, 2));
        assert_eq!(b.build().m(), 0);
    }
}
