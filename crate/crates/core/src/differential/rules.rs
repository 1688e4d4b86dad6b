//! The five hair reductions.
//!
//! A hair is a leaf `u` whose neighbor `v` has degree two; its anchor is
//! the other neighbor of `v`. Lifts rebuild a Roman function: the anchor
//! takes label 2 and the deleted vertices label at most 1, so the weight
//! grows by no more than the number of vertices put back.

use serde_json::json;

use crate::engine::{Reduction, Rule};
use crate::error::Result;
use crate::graph::{Graph, VertexId, VertexSet};
use crate::problem::Problem;

const P: Problem = Problem::Differential;

/// `(u, v, w)`: leaf `u`, degree-two `v`, anchor `w`, sorted.
pub fn hairs(g: &Graph) -> Vec<(VertexId, VertexId, VertexId)> {
    let mut out = Vec::new();
    for u in g.leaves() {
        let v = g.neighbors(u)[0];
        if g.degree(v) == 2 {
            let w = g.neighbors(v).iter().copied().find(|&t| t != u).unwrap();
            out.push((u, v, w));
        }
    }
    out
}

fn leaves_at(g: &Graph, w: VertexId) -> Vec<VertexId> {
    g.neighbors(w)
        .iter()
        .copied()
        .filter(|&l| g.degree(l) == 1)
        .collect()
}

fn hairs_at(g: &Graph, w: VertexId) -> Vec<(VertexId, VertexId)> {
    hairs(g)
        .into_iter()
        .filter(|h| h.2 == w)
        .map(|(u, v, _)| (u, v))
        .collect()
}

/// Lifted centers: `s` without `out`, plus the anchor.
fn recentre(s: &VertexSet, out: &[VertexId], anchor: VertexId) -> VertexSet {
    let mut s: VertexSet = s.iter().copied().filter(|v| !out.contains(v)).collect();
    s.insert(anchor);
    s
}

/// Two leaves on one vertex: join them.
pub struct LeafPair;
/// Two hairs on one vertex: delete both hair leaves.
pub struct HairPair;
/// A leaf and a hair on one vertex: delete the hair leaf.
pub struct LeafHair;
/// A hair on a vertex of degree two: delete the hair and that vertex.
pub struct LongHair;
/// Hairs on two adjacent vertices of degree at least three: delete the
/// edge between them.
pub struct NeighborHair;

impl Rule for LeafPair {
    fn id(&self) -> &'static str {
        "dif_leaf_pair"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = g.vertices().find_map(|w| {
            let l = leaves_at(g, w);
            (l.len() >= 2).then(|| (w, l[0], l[1]))
        });
        let Some((w, a, b)) = site else {
            return Ok(None);
        };
        let mut bld = g.builder();
        bld.add_edge(a, b);
        let payload = json!({ "anchor": w, "joined": [a, b] });
        Ok(Some(Reduction::new(
            bld.build(),
            (0, 0),
            "recentre",
            payload,
            move |_, _, s| Ok(recentre(s, &[a, b], w)),
        )))
    }
}

impl Rule for HairPair {
    fn id(&self) -> &'static str {
        "dif_hair_pair"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = g.vertices().find_map(|w| {
            let h = hairs_at(g, w);
            (h.len() >= 2).then(|| (w, h[0], h[1]))
        });
        let Some((w, (u1, v1), (u2, v2))) = site else {
            return Ok(None);
        };
        let out = g.without(&[u1, u2].into_iter().collect());
        let payload = json!({ "anchor": w, "deleted": [u1, u2] });
        Ok(Some(Reduction::new(
            out,
            (0, 0),
            "recentre",
            payload,
            move |_, _, s| Ok(recentre(s, &[v1, v2], w)),
        )))
    }
}

impl Rule for LeafHair {
    fn id(&self) -> &'static str {
        "dif_leaf_hair"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = hairs(g).into_iter().find_map(|(u, v, w)| {
            let l = leaves_at(g, w);
            l.first().map(|&l| (u, v, w, l))
        });
        let Some((u, v, w, l)) = site else {
            return Ok(None);
        };
        let out = g.without(&[u].into_iter().collect());
        let payload = json!({ "anchor": w, "leaf": l, "deleted": u });
        Ok(Some(Reduction::new(
            out,
            (0, 0),
            "recentre",
            payload,
            move |_, _, s| Ok(recentre(s, &[v, l], w)),
        )))
    }
}

impl Rule for LongHair {
    fn id(&self) -> &'static str {
        "dif_long_hair"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = hairs(g).into_iter().find(|&(_, _, w)| g.degree(w) == 2);
        let Some((u, v, w)) = site else {
            return Ok(None);
        };
        let out = g.without(&[u, v, w].into_iter().collect());
        let payload = json!({ "deleted": [u, v, w] });
        Ok(Some(Reduction::new(
            out,
            (1, 1),
            "add_hair_center",
            payload,
            move |_, _, s| {
                let mut s = s.clone();
                s.insert(v);
                Ok(s)
            },
        )))
    }
}

impl Rule for NeighborHair {
    fn id(&self) -> &'static str {
        "dif_neighbor_hair"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let anchors: VertexSet = hairs(g)
            .into_iter()
            .map(|h| h.2)
            .filter(|&w| g.degree(w) >= 3)
            .collect();
        let site = anchors.iter().find_map(|&w| {
            g.neighbors(w)
                .iter()
                .find(|&&t| t > w && anchors.contains(&t))
                .map(|&t| (w, t))
        });
        let Some((w, t)) = site else {
            return Ok(None);
        };
        let mut bld = g.builder();
        bld.remove_edge(w, t);
        let payload = json!({ "edge": [w, t] });
        Ok(Some(Reduction::new(
            bld.build(),
            (0, 0),
            "keep",
            payload,
            |_, _, s| Ok(s.clone()),
        )))
    }
}

pub fn rules() -> [&'static dyn Rule; 5] {
    [&LeafPair, &HairPair, &LeafHair, &LongHair, &NeighborHair]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::differential_value;

    fn set(v: &[VertexId]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn leaf_pair_joins_leaves() {
        let g = Graph::star(3);
        let r = LeafPair.reduce(&g).unwrap().unwrap();
        assert!(r.graph.has_edge(2, 3));
        assert_eq!(r.graph.m(), 4);
        let lifted = (r.lift)(&g, &r.graph, &set(&[2])).unwrap();
        assert_eq!(lifted, set(&[1]));
        assert_eq!(differential_value(&g, &lifted), 2);
    }

    #[test]
    fn long_hair_removes_three() {
        // hair 1-2 on vertex 3 of degree two, then a triangle 4-5-6
        let g = Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 4)]);
        let r = LongHair.reduce(&g).unwrap().unwrap();
        assert_eq!(r.graph.vertex_set(), set(&[4, 5, 6]));
        assert_eq!((r.a, r.b), (1, 1));
        let lifted = (r.lift)(&g, &r.graph, &set(&[4])).unwrap();
        assert_eq!(differential_value(&g, &lifted), 2);
    }

    #[test]
    fn neighbor_hair_drops_edge() {
        // triangle 1-2-3 with hairs 4-5 on 1 and 6-7 on 2
        let g = Graph::from_edges(7, &[(1, 2), (2, 3), (3, 1), (1, 5), (5, 4), (2, 7), (7, 6)]);
        assert!(LongHair.reduce(&g).unwrap().is_none());
        let r = NeighborHair.reduce(&g).unwrap().unwrap();
        assert!(!r.graph.has_edge(1, 2));
        assert_eq!(r.graph.n(), 7);
    }

    #[test]
    fn hair_and_leaf_rules() {
        // 1 carries hairs 2-3 and 4-5 and the leaf 6, plus a triangle 1-7-8
        let g = Graph::from_edges(
            8,
            &[
                (1, 3),
                (3, 2),
                (1, 5),
                (5, 4),
                (1, 6),
                (1, 7),
                (7, 8),
                (8, 1),
            ],
        );
        let r = HairPair.reduce(&g).unwrap().unwrap();
        assert_eq!(r.graph.n(), 6);
        let r = LeafHair.reduce(&g).unwrap().unwrap();
        assert!(!r.graph.contains(2));
    }
}
