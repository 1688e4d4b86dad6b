//! `k`-Nonblocker: the complement of a `k`-dominating set, within a factor
//! `k + 1` up to an additive `k`.
//!
//! Low-degree vertices (degree below `k`) lie in every `k`-dominating set.
//! They are deleted or traded for one `K_{k,k}` gadget, leaving minimum
//! degree `k`.

use std::sync::Arc;

use serde_json::json;

use crate::bounded;
use crate::engine::{run_to_fixpoint, Measure, Reduction, Rule, StepRecord};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::oracle::OracleConfig;
use crate::problem::{Problem, Solution};
use crate::solve::Outcome;

fn low(g: &Graph, k: usize, v: VertexId) -> bool {
    g.degree(v) < k
}

/// Deletes a low-degree vertex whose neighbors are all low, or, at a vertex
/// with more than `k` low neighbors, one of them whose other neighbors are
/// all low.
pub struct LowDegreeDeletion {
    pub k: usize,
}

/// Replaces all low-degree vertices by a `K_{k,k}` gadget `u_1..u_k`,
/// `v_1..v_k`: a vertex that had `q` low neighbors is wired to
/// `v_1..v_min(q,k)`.
pub struct LowDegreeMerging {
    pub k: usize,
}

impl Rule for LowDegreeDeletion {
    fn id(&self) -> &'static str {
        "knb_low_degree_deletion"
    }
    fn problem(&self) -> Problem {
        Problem::KNonblocker { k: self.k }
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let k = self.k;
        let lonely = g
            .vertices()
            .find(|&v| low(g, k, v) && g.neighbors(v).iter().all(|&w| low(g, k, w)));
        let extra = || {
            g.vertices().find_map(|u| {
                let lows: Vec<VertexId> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| low(g, k, w))
                    .collect();
                if lows.len() <= k {
                    return None;
                }
                lows.into_iter()
                    .find(|&w| g.neighbors(w).iter().all(|&t| t == u || low(g, k, t)))
                    .map(|w| (u, w))
            })
        };
        let (v, payload) = match lonely {
            Some(v) => (v, json!({ "deleted": v })),
            None => match extra() {
                Some((u, w)) => (w, json!({ "deleted": w, "at": u })),
                None => return Ok(None),
            },
        };
        let out = g.without(&[v].into_iter().collect());
        Ok(Some(Reduction::new(
            out,
            (0, 0),
            "dominate_deleted",
            payload,
            |_, _, s| Ok(s.clone()),
        )))
    }
}

impl Rule for LowDegreeMerging {
    fn id(&self) -> &'static str {
        "knb_low_degree_merging"
    }
    fn problem(&self) -> Problem {
        Problem::KNonblocker { k: self.k }
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let k = self.k;
        let lows: VertexSet = g.vertices().filter(|&v| low(g, k, v)).collect();
        if lows.is_empty() {
            return Ok(None);
        }
        let mut b = g.builder();
        let us: Vec<VertexId> = (0..k).map(|_| b.add_vertex()).collect();
        let vs: Vec<VertexId> = (0..k).map(|_| b.add_vertex()).collect();
        for &u in &us {
            for &v in &vs {
                b.add_edge(u, v);
            }
        }
        let mut wiring = Vec::new();
        for x in g.vertices().filter(|v| !lows.contains(v)) {
            let q = g.neighbors(x).iter().filter(|w| lows.contains(w)).count();
            for &v in &vs[..q.min(k)] {
                b.add_edge(x, v);
            }
            if q > 0 {
                wiring.push((x, q.min(k)));
            }
        }
        for &w in &lows {
            b.remove_vertex(w);
        }
        let out = b.build();
        let k = k as i64;
        let payload = json!({ "deleted": lows, "u": us, "v": vs, "wiring": wiring });
        let r = Reduction::new(
            out,
            (-k, -k),
            "normalize_gadget",
            payload,
            move |_, _, s| {
                let mut s = s.clone();
                if !us.iter().all(|u| s.contains(u)) {
                    for v in &vs {
                        s.remove(v);
                    }
                    s.extend(us.iter().copied());
                }
                for t in us.iter().chain(&vs) {
                    s.remove(t);
                }
                Ok(s)
            },
        );
        Ok(Some(r))
    }
}

pub fn rules(k: usize) -> (LowDegreeDeletion, LowDegreeMerging) {
    (LowDegreeDeletion { k }, LowDegreeMerging { k })
}

/// The deletion fixpoint followed by a single merging step.
pub fn reduce(g: &Graph, k: usize) -> Result<(Graph, crate::engine::ReductionTrace)> {
    let (del, merge) = rules(k);
    let p = Problem::KNonblocker { k };
    let (reduced, mut trace) = run_to_fixpoint(g, &[&del], p, Measure::Size)?;
    if let Some(r) = merge.reduce(&reduced)? {
        trace.push(StepRecord::new(merge.id(), Arc::new(reduced), r));
    }
    let host = trace.final_graph().clone();
    if host.min_degree().is_some_and(|d| d < k) {
        return Err(Error::StructuralViolation(format!(
            "merged graph has a vertex of degree < {k}"
        )));
    }
    Ok((host, trace))
}

pub fn solve_k_nonblocker(g: &Graph, k: usize, cfg: &OracleConfig) -> Result<Outcome> {
    if k < 2 {
        return Err(Error::PreconditionViolated(format!(
            "k-nonblocker needs k >= 2, got {k}"
        )));
    }
    let (host, trace) = reduce(g, k)?;
    let (d, mut certificate) = bounded::bounded_kds(&host, k, cfg)?;
    certificate.additive_slack = k as i64;
    let s: VertexSet = host.vertices().filter(|v| !d.contains(v)).collect();
    let lifted = trace.lift(&s)?;
    let solution = Solution::new(Problem::KNonblocker { k }, g, lifted)?;
    Ok(Outcome {
        solution,
        trace,
        certificate,
        inner: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn opt(g: &Graph, k: usize) -> i64 {
        oracle::exact_optimum(Problem::KNonblocker { k }, g, &OracleConfig::default())
            .unwrap()
            .value
    }

    #[test]
    fn star_keeps_k_low_neighbors() {
        let g = Graph::star(5);
        let (host, trace) = reduce(&g, 2).unwrap();
        let deletions = trace
            .steps
            .iter()
            .filter(|s| s.rule_id == "knb_low_degree_deletion")
            .count();
        assert_eq!(deletions, 3);
        assert_eq!(host.n(), 1 + 4);
        assert!(host.min_degree().unwrap() >= 2);
    }

    #[test]
    fn merging_on_p3() {
        let g = Graph::path(3);
        let r = LowDegreeMerging { k: 2 }.reduce(&g).unwrap().unwrap();
        assert_eq!((r.a, r.b), (-2, -2));
        assert_eq!(r.graph.n(), 5);
        assert_eq!(r.graph.degree(2), 2);
        assert!(r.graph.vertices().all(|v| r.graph.degree(v) >= 2));
    }

    #[test]
    fn examples() {
        let cfg = OracleConfig::default();
        for (g, k) in [
            (Graph::complete(5), 2),
            (Graph::complete_bipartite(3, 3), 2),
            (Graph::path(6), 2),
            (Graph::petersen(), 3),
            (Graph::star(7), 3),
        ] {
            let out = solve_k_nonblocker(&g, k, &cfg).unwrap();
            let o = opt(&g, k);
            assert!(
                (k as i64 + 1) * (out.solution.value + k as i64) >= o,
                "{g:?}"
            );
            assert_eq!(out.certificate.additive_slack, k as i64);
        }
        assert!(solve_k_nonblocker(&Graph::path(3), 1, &cfg).is_err());
    }
}
