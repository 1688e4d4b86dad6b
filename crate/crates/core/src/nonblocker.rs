//! Factor-5/3 approximation for Nonblocker.
//!
//! Reduce isolates, merge the leaf neighbors and drop surplus leaves, so
//! every component has minimum degree two except one with a single leaf
//! `x`. Doubling that graph and bridging `x` with its copy gives minimum
//! degree two everywhere, where dominating sets of size `2n/5` exist.

use std::collections::BTreeMap;

use serde_json::json;

use crate::bounded::{self, BoundCertificate, BoundKind, ComponentBound, Method};
use crate::engine::{run_to_fixpoint, Measure, Reduction, Rule};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::oracle::{self, OracleConfig};
use crate::problem::{Problem, Solution};
use crate::solve::Outcome;

/// Deletes an isolated vertex, or an isolated edge whose smaller endpoint
/// joins the nonblocker on lift.
pub struct Isolates;

/// Merges all vertices that have a leaf neighbor into one fresh vertex.
pub struct MergeLeafNeighbors;

/// Deletes the largest-id leaf of a vertex with two or more leaves.
pub struct DeleteExtraLeaves;

impl Rule for Isolates {
    fn id(&self) -> &'static str {
        "nb_isolate"
    }

    fn problem(&self) -> Problem {
        Problem::Nonblocker
    }

    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        if let Some(&v) = g.isolates().first() {
            let out = g.without(&[v].into_iter().collect());
            return Ok(Some(Reduction::new(
                out,
                (0, 0),
                "keep",
                json!({ "vertex": v }),
                |_, _, s| Ok(s.clone()),
            )));
        }
        let Some((u, w)) = isolated_edge(g) else {
            return Ok(None);
        };
        let out = g.without(&[u, w].into_iter().collect());
        Ok(Some(Reduction::new(
            out,
            (1, 1),
            "add_endpoint",
            json!({ "edge": [u, w] }),
            move |_, _, s| {
                let mut s = s.clone();
                s.insert(u);
                Ok(s)
            },
        )))
    }
}

fn isolated_edge(g: &Graph) -> Option<(VertexId, VertexId)> {
    g.leaves().into_iter().find_map(|u| {
        let w = g.neighbors(u)[0];
        (g.degree(w) == 1).then_some((u, w))
    })
}

/// Vertices of degree at least two with a leaf neighbor.
pub fn leaf_neighbors(g: &Graph) -> VertexSet {
    g.leaves()
        .iter()
        .map(|&l| g.neighbors(l)[0])
        .filter(|&v| g.degree(v) >= 2)
        .collect()
}

impl Rule for MergeLeafNeighbors {
    fn id(&self) -> &'static str {
        "nb_merge_leaf_neighbors"
    }

    fn problem(&self) -> Problem {
        Problem::Nonblocker
    }

    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let group = leaf_neighbors(g);
        if group.len() < 2 {
            return Ok(None);
        }
        let mut b = g.builder();
        let y = b.merge(&group);
        let out = b.build();
        let payload = json!({ "merged": group, "into": y });
        let originals = group.clone();
        let r = Reduction::new(out, (0, 0), "expand_merged", payload, move |_, after, s| {
            let mut s = s.clone();
            if s.remove(&y) {
                // y has a leaf, which then sits on the dominating side
                let x = after
                    .neighbors(y)
                    .iter()
                    .copied()
                    .find(|&x| after.degree(x) == 1);
                let x = x.ok_or_else(|| Error::InfeasibleLift {
                    rule: "nb_merge_leaf_neighbors".into(),
                    reason: format!("merged vertex {y} has no leaf"),
                })?;
                s.insert(x);
            }
            Ok(s)
        });
        Ok(Some(r.with_merge(y, originals)))
    }
}

impl Rule for DeleteExtraLeaves {
    fn id(&self) -> &'static str {
        "nb_delete_extra_leaves"
    }

    fn problem(&self) -> Problem {
        Problem::Nonblocker
    }

    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = g.vertices().find_map(|v| {
            let leaves: Vec<_> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&l| g.degree(l) == 1)
                .collect();
            (leaves.len() >= 2).then(|| (v, leaves[0], *leaves.last().unwrap()))
        });
        let Some((v, keep, leaf)) = site else {
            return Ok(None);
        };
        let out = g.without(&[leaf].into_iter().collect());
        let payload = json!({ "support": v, "deleted": leaf });
        Ok(Some(Reduction::new(
            out,
            (1, 1),
            "restore_leaf",
            payload,
            move |_, _, s| {
                let mut s = s.clone();
                if s.remove(&v) {
                    s.insert(keep);
                }
                s.insert(leaf);
                Ok(s)
            },
        )))
    }
}

pub fn rules() -> [&'static dyn Rule; 3] {
    [&Isolates, &MergeLeafNeighbors, &DeleteExtraLeaves]
}

/// `G`, a disjoint copy `G'` and, when `G` has a leaf `x`, the bridge `xx'`.
#[derive(Clone, Debug)]
pub struct Doubled {
    pub host: Graph,
    /// `v -> v'` for every vertex of `G`.
    pub copy: BTreeMap<VertexId, VertexId>,
    /// The leaf `x` and its neighbor `y`.
    pub leaf: Option<(VertexId, VertexId)>,
}

/// Doubles a reduced graph; it has at most one leaf.
pub fn double_with_bridge(g: &Graph) -> Result<Doubled> {
    let leaves = g.leaves();
    if leaves.len() > 1 || !g.isolates().is_empty() {
        return Err(Error::StructuralViolation(format!(
            "reduced graph has {} leaves and {} isolates",
            leaves.len(),
            g.isolates().len()
        )));
    }
    let (host, copy) = g.disjoint_union(g, g.next_id());
    let leaf = leaves.first().map(|&x| (x, g.neighbors(x)[0]));
    let host = match leaf {
        Some((x, _)) => {
            let mut b = host.builder();
            b.add_edge(x, copy[&x]);
            b.build()
        }
        None => host,
    };
    if host.min_degree().is_some_and(|d| d < 2) {
        return Err(Error::StructuralViolation(
            "doubled graph has a vertex of degree < 2".into(),
        ));
    }
    Ok(Doubled { host, copy, leaf })
}

/// Makes `d`, dominating `G` except possibly at the leaf `x`, dominate `G`:
/// `x` is swapped for its neighbor `y`, and `y` is added if neither is in.
pub fn repair_leaf_endpoint(d: &mut VertexSet, x: VertexId, y: VertexId) {
    if d.remove(&x) || !d.contains(&y) {
        d.insert(y);
    }
}

pub fn solve_nonblocker(g: &Graph, cfg: &OracleConfig) -> Result<Outcome> {
    let problem = Problem::Nonblocker;
    let (reduced, trace) = run_to_fixpoint(g, &rules(), problem, Measure::Size)?;
    let (dominating, certificate, inner) = dominate_reduced(&reduced, cfg)?;
    let s: VertexSet = reduced
        .vertices()
        .filter(|v| !dominating.contains(v))
        .collect();
    let lifted = trace.lift(&s)?;
    let solution = Solution::new(problem, g, lifted)?;
    Ok(Outcome {
        solution,
        trace,
        certificate,
        inner,
    })
}

/// Dominating set of the reduced graph with `|D_c| <= 2n_c/5` on every
/// component, unless that component is solved exactly.
fn dominate_reduced(
    g: &Graph,
    cfg: &OracleConfig,
) -> Result<(VertexSet, BoundCertificate, Option<BoundCertificate>)> {
    let kind = BoundKind::DsTwoFifths;
    if g.is_empty() {
        return Ok((
            VertexSet::new(),
            BoundCertificate::new(kind, Vec::new()),
            None,
        ));
    }
    let doubled = double_with_bridge(g)?;
    let (dh, inner) = bounded::bounded_ds(&doubled.host, cfg)?;
    let back: BTreeMap<VertexId, VertexId> = doubled.copy.iter().map(|(&v, &w)| (w, v)).collect();
    let mut all = VertexSet::new();
    let mut comps = Vec::new();
    for comp in g.component_sets() {
        let mut original: VertexSet = comp.iter().copied().filter(|v| dh.contains(v)).collect();
        let mut copied: VertexSet = comp
            .iter()
            .filter(|v| dh.contains(&doubled.copy[v]))
            .copied()
            .collect();
        if let Some((x, y)) = doubled.leaf.filter(|(x, _)| comp.contains(x)) {
            repair_leaf_endpoint(&mut original, x, y);
            repair_leaf_endpoint(&mut copied, x, y);
        }
        debug_assert!(copied.iter().all(|v| back.contains_key(&doubled.copy[v])));
        let mut d = if copied.len() < original.len() {
            copied
        } else {
            original
        };
        let sub = g.induced(&comp);
        if !oracle::verify_dominating(&sub, &d) {
            return Err(Error::StructuralViolation(format!(
                "side of the doubled solution does not dominate component {comp:?}"
            )));
        }
        let target = kind.value(comp.len());
        let mut method = Method::Heuristic;
        if d.len() as i64 > target {
            match bounded::certified_cover(&sub, true, target) {
                Ok((found, m)) => (d, method) = (found, m),
                Err(Error::BoundNotCertified { .. }) if sub.n() <= cfg.bound => {
                    (d, method) = (oracle::exact_min_ds(&sub, cfg)?, Method::Exact)
                }
                Err(e) => return Err(e),
            }
        }
        comps.push(ComponentBound {
            n: comp.len(),
            bound: target,
            achieved: d.len() as i64,
            method,
        });
        all.extend(d);
    }
    Ok((all, BoundCertificate::new(kind, comps), Some(inner)))
}
