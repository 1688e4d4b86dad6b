//! Maximal chains: induced paths whose interior vertices have degree two.

use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainKind {
    /// Both endpoints are leaves; the chain is a whole path component.
    Floating,
    /// Exactly one endpoint is a leaf. `start` is the support vertex.
    Pendant,
    /// Two distinct endpoints of degree at least three.
    Internal,
    /// A closed run of degree-two vertices. With an anchor the run leaves and
    /// re-enters the same vertex, without one it is a whole cycle component.
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub kind: ChainKind,
    pub start: Option<VertexId>,
    pub interior: Vec<VertexId>,
    pub end: Option<VertexId>,
}

impl Chain {
    /// For pendant chains, the non-leaf endpoint.
    pub fn support(&self) -> Option<VertexId> {
        match self.kind {
            ChainKind::Pendant => self.start,
            _ => None,
        }
    }

    /// Number of edges on the chain.
    pub fn length(&self) -> usize {
        match (self.start, self.end) {
            (Some(_), Some(_)) => self.interior.len() + 1,
            _ => self.interior.len(),
        }
    }

    /// All vertices of the chain in path order; a loop anchor appears once.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.interior.len() + 2);
        out.extend(self.start);
        out.extend(&self.interior);
        if self.end != self.start {
            out.extend(self.end);
        }
        out
    }
}

/// Every maximal chain with a nonempty interior, plus every leaf edge whose
/// other endpoint is not of degree two, each reported exactly once.
///
/// The interiors partition the degree-two vertices of `g`.
pub fn find_chains(g: &Graph) -> Vec<Chain> {
    let mut seen = VertexSet::new();
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.degree(v) != 2 || seen.contains(&v) {
            continue;
        }
        out.push(walk_run(g, v, &mut seen));
    }
    for t in g.vertices() {
        if g.degree(t) != 1 {
            continue;
        }
        let s = g.neighbors(t)[0];
        if g.degree(s) == 2 {
            continue;
        }
        if g.degree(s) == 1 {
            if t < s {
                out.push(Chain {
                    kind: ChainKind::Floating,
                    start: Some(t),
                    interior: Vec::new(),
                    end: Some(s),
                });
            }
            continue;
        }
        out.push(Chain {
            kind: ChainKind::Pendant,
            start: Some(s),
            interior: Vec::new(),
            end: Some(t),
        });
    }
    out.sort_by_key(|c| c.vertices().into_iter().min());
    out
}

fn walk_run(g: &Graph, v: VertexId, seen: &mut VertexSet) -> Chain {
    seen.insert(v);
    let nb = g.neighbors(v);
    // walk away from v in one direction until a non-degree-two vertex
    let extend = |first: VertexId, seen: &mut VertexSet| -> (Vec<VertexId>, Option<VertexId>) {
        let mut run = Vec::new();
        let (mut prev, mut cur) = (v, first);
        loop {
            if cur == v {
                return (run, None);
            }
            if g.degree(cur) != 2 {
                return (run, Some(cur));
            }
            seen.insert(cur);
            run.push(cur);
            let next = g
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| w != prev)
                .unwrap();
            prev = cur;
            cur = next;
        }
    };
    let (right, right_end) = extend(nb[1], seen);
    if right_end.is_none() {
        // closed cycle of degree-two vertices; rotate to the smallest id
        let mut cyc = vec![v];
        cyc.extend(right);
        let at = cyc.iter().enumerate().min_by_key(|(_, &x)| x).unwrap().0;
        cyc.rotate_left(at);
        if cyc.len() > 2 && cyc[cyc.len() - 1] < cyc[1] {
            cyc[1..].reverse();
        }
        return Chain {
            kind: ChainKind::Cycle,
            start: None,
            interior: cyc,
            end: None,
        };
    }
    let (left, left_end) = extend(nb[0], seen);
    let mut interior: Vec<_> = left.into_iter().rev().collect();
    interior.push(v);
    interior.extend(right);
    let (mut a, mut b) = (left_end.unwrap(), right_end.unwrap());
    let leaf = |x: VertexId| g.degree(x) == 1;
    let kind = if a == b {
        ChainKind::Cycle
    } else if leaf(a) && leaf(b) {
        ChainKind::Floating
    } else if leaf(a) || leaf(b) {
        ChainKind::Pendant
    } else {
        ChainKind::Internal
    };
    let flip = match kind {
        ChainKind::Pendant => leaf(a),
        ChainKind::Cycle => interior.len() > 1 && interior[interior.len() - 1] < interior[0],
        _ => a > b,
    };
    if flip {
        std::mem::swap(&mut a, &mut b);
        interior.reverse();
    }
    Chain {
        kind,
        start: Some(a),
        interior,
        end: Some(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_one_floating_chain() {
        let chains = find_chains(&Graph::path(5));
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].kind, ChainKind::Floating);
        assert_eq!(chains[0].interior, vec![2, 3, 4]);
        assert_eq!(chains[0].length(), 4);
    }

    #[test]
    fn k2_is_floating_with_empty_interior() {
        let chains = find_chains(&Graph::path(2));
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].kind, ChainKind::Floating);
        assert!(chains[0].interior.is_empty());
    }

    #[test]
    fn pendant_path_on_c4() {
        // C4 on 1..4 with 1-5-6 hanging off vertex 1
        let g = Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6)]);
        let chains = find_chains(&g);
        let pendant: Vec<_> = chains
            .iter()
            .filter(|c| c.kind == ChainKind::Pendant)
            .collect();
        assert_eq!(pendant.len(), 1);
        assert_eq!(pendant[0].support(), Some(1));
        assert_eq!(pendant[0].interior, vec![5]);
        assert_eq!(pendant[0].end, Some(6));
        let looped: Vec<_> = chains
            .iter()
            .filter(|c| c.kind == ChainKind::Cycle)
            .collect();
        assert_eq!(looped.len(), 1);
        assert_eq!(looped[0].start, Some(1));
        assert_eq!(looped[0].interior, vec![2, 3, 4]);
    }

    #[test]
    fn cycle_component() {
        let chains = find_chains(&Graph::cycle(6));
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].kind, ChainKind::Cycle);
        assert_eq!(chains[0].start, None);
        assert_eq!(chains[0].interior, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn leaf_edge_on_high_degree_vertex() {
        let chains = find_chains(&Graph::star(3));
        assert_eq!(chains.len(), 3);
        assert!(chains
            .iter()
            .all(|c| c.kind == ChainKind::Pendant && c.support() == Some(1)));
    }
}
