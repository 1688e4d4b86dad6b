//! Differential: maximize `|N(S) \ S| - |S|`.

mod packing;
mod roman;
mod rules;

pub use packing::{local_search, Orientation, StarPacking};
pub use roman::RomanPartition;
pub use rules::{hairs, rules, HairPair, LeafHair, LeafPair, LongHair, NeighborHair};

use std::collections::BTreeMap;

use crate::bounded::{BoundCertificate, BoundKind, ComponentBound, Method};
use crate::engine::{run_to_fixpoint, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::oracle::{self, OracleConfig};
use crate::problem::{Problem, Solution};
use crate::solve::Outcome;

/// Nucleus components up to this order are solved exactly. Every connected
/// graph of minimum degree two below `3n/11` is this small; three of them
/// have order 8 (`C8` among them).
pub const EXACT_ORDER: usize = 8;

/// The reduced graph without its leaves, hairs and isolated vertices.
#[derive(Clone, Debug)]
pub struct Nucleus {
    pub graph: Graph,
    /// Removed vertex to the nucleus vertex it hangs on; `None` for
    /// isolated vertices and isolated edges.
    pub attachment: BTreeMap<VertexId, Option<VertexId>>,
}

impl Nucleus {
    pub fn d(&self) -> usize {
        self.attachment.len()
    }
}

pub fn extract_nucleus(g: &Graph) -> Result<Nucleus> {
    let mut attachment = BTreeMap::new();
    for v in g.isolates() {
        attachment.insert(v, None);
    }
    for u in g.leaves() {
        let v = g.neighbors(u)[0];
        match g.degree(v) {
            1 => {
                attachment.insert(u, None);
            }
            2 => {
                let w = g.neighbors(v).iter().copied().find(|&t| t != u).unwrap();
                attachment.insert(u, Some(w));
                attachment.insert(v, Some(w));
            }
            _ => {
                attachment.insert(u, Some(v));
            }
        }
    }
    let removed: VertexSet = attachment.keys().copied().collect();
    if let Some((v, _)) = attachment
        .iter()
        .find(|(_, a)| a.is_some_and(|a| removed.contains(&a)))
    {
        return Err(Error::StructuralViolation(format!(
            "vertex {v} hangs on a removed vertex"
        )));
    }
    let graph = g.without(&removed);
    if let Some(v) = graph.vertices().find(|&v| graph.degree(v) < 2) {
        return Err(Error::StructuralViolation(format!(
            "nucleus vertex {v} has degree < 2"
        )));
    }
    Ok(Nucleus { graph, attachment })
}

/// Differential set of a nucleus component with its bound record.
fn solve_component(c: &Graph, cfg: &OracleConfig) -> Result<(VertexSet, ComponentBound)> {
    let n = c.n();
    let bound = BoundKind::RomanEightElevenths.value(n);
    let weight = |s: &VertexSet| n as i64 - oracle::differential_value(c, s);
    let exact = |c: &Graph| -> Result<(VertexSet, ComponentBound)> {
        let s = oracle::exact_max_differential(c, cfg)?;
        let achieved = weight(&s);
        Ok((
            s,
            ComponentBound {
                n,
                bound,
                achieved,
                method: Method::Exact,
            },
        ))
    };
    if n <= EXACT_ORDER {
        return exact(c);
    }
    let packing = StarPacking::build(c);
    let s = local_search(c, &packing.centers());
    let achieved = weight(&s);
    if achieved <= bound {
        return Ok((
            s,
            ComponentBound {
                n,
                bound,
                achieved,
                method: Method::Heuristic,
            },
        ));
    }
    if n <= cfg.differential_bound {
        return exact(c);
    }
    Err(Error::BoundNotCertified { n, achieved, bound })
}

pub fn solve_differential(g: &Graph, cfg: &OracleConfig) -> Result<Outcome> {
    let p = Problem::Differential;
    let (reduced, trace) = run_to_fixpoint(g, &rules(), p, Measure::SizeAndLeaves)?;
    let nucleus = extract_nucleus(&reduced)?;
    let mut centers = VertexSet::new();
    let mut comps = Vec::new();
    for c in nucleus.graph.components() {
        let (s, bound) = solve_component(&c, cfg)?;
        centers.extend(s);
        comps.push(bound);
    }
    // the centers keep label 2; removed vertices get 0 or 1, then any
    // strictly improving change is taken
    let centers = local_search(&reduced, &centers);
    let lifted = trace.lift(&centers)?;
    let solution = Solution::new(p, g, lifted)?;
    let roman = RomanPartition::from_centers(g, &solution.vertices);
    if !roman.is_valid(g) || g.n() as i64 - roman.weight() != solution.value {
        return Err(Error::StructuralViolation(
            "Roman weight disagrees with the differential".into(),
        ));
    }
    Ok(Outcome {
        solution,
        trace,
        certificate: BoundCertificate::new(BoundKind::RomanEightElevenths, comps),
        inner: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opt(g: &Graph) -> i64 {
        oracle::exact_optimum(Problem::Differential, g, &OracleConfig::default())
            .unwrap()
            .value
    }

    #[test]
    fn nucleus_of_hairy_cycle() {
        let mut b = Graph::cycle(5).builder();
        b.add_vertex_with_id(6);
        b.add_vertex_with_id(7);
        b.add_edge(1, 6);
        b.add_edge(6, 7);
        let nu = extract_nucleus(&b.build()).unwrap();
        assert_eq!(nu.graph.n(), 5);
        assert_eq!(nu.d(), 2);
        assert_eq!(nu.attachment[&7], Some(1));
        assert_eq!(extract_nucleus(&Graph::petersen()).unwrap().d(), 0);
    }

    #[test]
    fn examples() {
        let cfg = OracleConfig::default();
        let out = solve_differential(&Graph::path(4), &cfg).unwrap();
        assert_eq!(out.solution.value, 1);
        let out = solve_differential(&Graph::star(9), &cfg).unwrap();
        assert!(out.solution.value >= 3);
        let two_k2 = Graph::from_edges(4, &[(1, 2), (3, 4)]);
        let out = solve_differential(&two_k2, &cfg).unwrap();
        assert!(out.solution.vertices.is_empty());
        for g in [
            Graph::petersen(),
            Graph::cycle(5),
            Graph::complete(4),
            Graph::cycle(13),
        ] {
            let out = solve_differential(&g, &cfg).unwrap();
            assert!(11 * out.solution.value >= 3 * opt(&g), "{g:?}");
        }
        let out = solve_differential(&Graph::petersen(), &cfg).unwrap();
        assert!(out.solution.value >= 3 && out.certificate.holds());
    }
}
