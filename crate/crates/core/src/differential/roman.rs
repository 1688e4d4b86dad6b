use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

/// A Roman domination function as its three label classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RomanPartition {
    pub d0: VertexSet,
    pub d1: VertexSet,
    pub d2: VertexSet,
}

impl RomanPartition {
    /// The partition induced by a differential set `s`: `s` gets label 2,
    /// its outside neighbors label 0, everything else label 1.
    pub fn from_centers(g: &Graph, s: &VertexSet) -> Self {
        let d2: VertexSet = s.iter().copied().filter(|&v| g.contains(v)).collect();
        let d0: VertexSet = g.open_neighborhood(&d2).difference(&d2).copied().collect();
        let d1 = g
            .vertices()
            .filter(|v| !d0.contains(v) && !d2.contains(v))
            .collect();
        RomanPartition { d0, d1, d2 }
    }

    pub fn weight(&self) -> i64 {
        2 * self.d2.len() as i64 + self.d1.len() as i64
    }

    /// Disjoint cover of `V(g)` where every 0-vertex has a 2-neighbor.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let total = self.d0.len() + self.d1.len() + self.d2.len();
        let all: VertexSet = self
            .d0
            .iter()
            .chain(&self.d1)
            .chain(&self.d2)
            .copied()
            .collect();
        all.len() == total
            && all == g.vertex_set()
            && self
                .d0
                .iter()
                .all(|&v| g.neighbors(v).iter().any(|u| self.d2.contains(u)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::differential_value;

    #[test]
    fn star_center_partition() {
        let g = Graph::star(4);
        let s: VertexSet = [1].into_iter().collect();
        let r = RomanPartition::from_centers(&g, &s);
        assert!(r.is_valid(&g));
        assert_eq!(r.weight(), 2);
        assert_eq!(g.n() as i64 - r.weight(), differential_value(&g, &s));
    }

    #[test]
    fn invalid_when_zero_is_undominated() {
        let g = Graph::path(3);
        let r = RomanPartition {
            d0: [1].into_iter().collect(),
            d1: [2, 3].into_iter().collect(),
            d2: VertexSet::new(),
        };
        assert!(!r.is_valid(&g));
    }
}
