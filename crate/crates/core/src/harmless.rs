//! Factor-2 approximation for Harmless Set, the complement of a total
//! dominating set.
//!
//! After the six rules every vertex has at most one leaf and no three
//! consecutive vertices have degree two outside doubled pendant paths. The
//! reduced graph `G` is doubled, corresponding support vertices are joined
//! and all leaves removed; a small TDS of that graph `H` restricted to the
//! better half, plus the support vertices, is a TDS of `G` within
//! `(n + d) / 2`, where `d` is the number of leaves.

use std::collections::BTreeMap;

use serde_json::json;

use crate::bounded::{self, BoundCertificate, BoundKind, ComponentBound, Method};
use crate::chains::{find_chains, ChainKind};
use crate::engine::{run_to_fixpoint, Measure, Reduction, ReductionTrace, Rule};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::oracle::{self, OracleConfig};
use crate::problem::{Problem, Solution};
use crate::solve::Outcome;

const P: Problem = Problem::Harmless;

/// Isolated vertex: no solution. Isolated edge: both endpoints dominate
/// each other, delete it with `(0, 0)`.
pub struct Isolate;
/// Deletes the largest-id leaf of a vertex with two leaves.
pub struct Leaf;
/// Deletes a whole path or cycle component, gaining its optimum.
pub struct FloatingChain;
/// On a cycle `x-u-v-w-x` with `u, v, w` of degree two, deletes `u`.
pub struct CycleChain;
/// Of two short pendant chains at one support, deletes one and keeps a
/// chain of length two.
pub struct PendantChain;
/// On `x-u-v-w-y` with `u, v, w` of degree two and `x, y` non-adjacent,
/// merges `x` and `y` and deletes `u, v, w`.
pub struct LongChain;

fn one(v: VertexId) -> VertexSet {
    [v].into_iter().collect()
}

fn add(s: &VertexSet, extra: &[VertexId]) -> VertexSet {
    let mut s = s.clone();
    s.extend(extra.iter().copied());
    s
}

impl Rule for Isolate {
    fn id(&self) -> &'static str {
        "hs_isolate"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        if let Some(&v) = g.isolates().first() {
            return Err(Error::InfeasibleInstance(format!(
                "vertex {v} is isolated and cannot be totally dominated"
            )));
        }
        let edge = g.leaves().into_iter().find_map(|u| {
            let w = g.neighbors(u)[0];
            (g.degree(w) == 1).then_some((u, w))
        });
        let Some((u, w)) = edge else {
            return Ok(None);
        };
        let out = g.without(&[u, w].into_iter().collect());
        Ok(Some(Reduction::new(
            out,
            (0, 0),
            "keep",
            json!({ "edge": [u, w] }),
            |_, _, s| Ok(s.clone()),
        )))
    }
}

impl Rule for Leaf {
    fn id(&self) -> &'static str {
        "hs_leaf"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = g.vertices().find_map(|w| {
            let leaves: Vec<_> = g
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&l| g.degree(l) == 1)
                .collect();
            (leaves.len() >= 2).then(|| (w, *leaves.last().unwrap()))
        });
        let Some((w, leaf)) = site else {
            return Ok(None);
        };
        let out = g.without(&one(leaf));
        let payload = json!({ "support": w, "deleted": leaf });
        Ok(Some(Reduction::new(
            out,
            (1, 1),
            "add_leaf",
            payload,
            move |_, _, s| Ok(add(s, &[leaf])),
        )))
    }
}

/// Best predecessor state for each `(previous, current)` membership pair.
type Layer = [[Option<(usize, bool)>; 2]; 2];

/// Minimum total dominating set of a path (`cyclic == false`) or cycle
/// given in walking order, by dynamic programming over consecutive pairs.
#[allow(clippy::needless_range_loop)]
pub fn path_cycle_tds(order: &[VertexId], cyclic: bool) -> VertexSet {
    let n = order.len();
    assert!(n >= 2 && (!cyclic || n >= 3));
    let mut best: Option<Vec<bool>> = None;
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        // layer k: state (x[k], x[k+1]) -> (cost, x[k-1])
        let mut layers: Vec<Layer> = Vec::with_capacity(n - 1);
        let mut init = [[None; 2]; 2];
        init[a as usize][b as usize] = Some((a as usize + b as usize, false));
        layers.push(init);
        for i in 2..n {
            let prev = layers[i - 2];
            let mut next = [[None; 2]; 2];
            for p in 0..2 {
                for c in 0..2 {
                    let Some((cost, _)) = prev[p][c] else {
                        continue;
                    };
                    for x in 0..2 {
                        // vertex i-1 needs x[i-2] or x[i]; vertex 0 is checked at the end
                        if i > 1 && p == 0 && x == 0 {
                            continue;
                        }
                        let cand = (cost + x, p == 1);
                        if next[c][x].is_none_or(|(v, _)| cand.0 < v) {
                            next[c][x] = Some(cand);
                        }
                    }
                }
            }
            layers.push(next);
        }
        let last = layers[n - 2];
        for p in 0..2 {
            for c in 0..2 {
                let Some((cost, _)) = last[p][c] else {
                    continue;
                };
                let first_ok = b || (cyclic && c == 1);
                let last_ok = p == 1 || (cyclic && a);
                if !(first_ok && last_ok)
                    || best
                        .as_ref()
                        .is_some_and(|bx| bx.iter().filter(|&&t| t).count() <= cost)
                {
                    continue;
                }
                let mut x = vec![false; n];
                x[n - 1] = c == 1;
                x[n - 2] = p == 1;
                let mut state = (p, c);
                for k in (1..n - 1).rev() {
                    let (_, before) = layers[k][state.0][state.1].unwrap();
                    x[k - 1] = before;
                    state = (before as usize, state.0);
                }
                best = Some(x);
            }
        }
    }
    let x = best.expect("paths and cycles of order >= 2 have a total dominating set");
    order
        .iter()
        .zip(x)
        .filter(|(_, t)| *t)
        .map(|(&v, _)| v)
        .collect()
}

impl Rule for FloatingChain {
    fn id(&self) -> &'static str {
        "hs_floating_chain"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let comp = g
            .component_sets()
            .into_iter()
            .find(|c| c.len() >= 2 && c.iter().all(|&v| g.degree(v) <= 2));
        let Some(comp) = comp else {
            return Ok(None);
        };
        let (order, cyclic) = traversal(g, &comp);
        let tds = path_cycle_tds(&order, cyclic);
        let gain: Vec<VertexId> = comp.iter().copied().filter(|v| !tds.contains(v)).collect();
        let s = gain.len() as i64;
        let out = g.without(&comp);
        let payload = json!({ "component": comp, "harmless": gain, "cyclic": cyclic });
        Ok(Some(Reduction::new(
            out,
            (s, s),
            "add_optimum",
            payload,
            move |_, _, sol| Ok(add(sol, &gain)),
        )))
    }
}

/// Vertices of a path or cycle component in walking order.
fn traversal(g: &Graph, comp: &VertexSet) -> (Vec<VertexId>, bool) {
    let start = comp
        .iter()
        .copied()
        .find(|&v| g.degree(v) == 1)
        .unwrap_or(*comp.iter().next().unwrap());
    let cyclic = g.degree(start) == 2;
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| Some(w) != prev && w != start);
        match next {
            Some(w) if !order.contains(&w) => {
                prev = Some(cur);
                cur = w;
                order.push(w);
            }
            _ => break,
        }
    }
    (order, cyclic)
}

impl Rule for CycleChain {
    fn id(&self) -> &'static str {
        "hs_cycle_chain"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let site = find_chains(g)
            .into_iter()
            .find_map(|c| match (c.kind, c.start) {
                (ChainKind::Cycle, Some(x)) if c.interior.len() == 3 => Some((x, c.interior[0])),
                _ => None,
            });
        let Some((x, u)) = site else {
            return Ok(None);
        };
        let out = g.without(&one(u));
        Ok(Some(Reduction::new(
            out,
            (1, 1),
            "add_deleted",
            json!({ "anchor": x, "deleted": u }),
            move |_, _, s| Ok(add(s, &[u])),
        )))
    }
}

impl Rule for PendantChain {
    fn id(&self) -> &'static str {
        "hs_pendant_chain"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let mut by_support: BTreeMap<VertexId, Vec<Vec<VertexId>>> = BTreeMap::new();
        for c in find_chains(g) {
            if c.kind == ChainKind::Pendant && c.length() <= 2 {
                // path from the support outwards
                let mut path = c.interior.clone();
                path.push(c.end.unwrap());
                by_support.entry(c.start.unwrap()).or_default().push(path);
            }
        }
        for (v, mut chains) in by_support {
            if chains.len() < 2 {
                continue;
            }
            chains.sort_by_key(|p| *p.last().unwrap());
            let Some(ki) = chains.iter().position(|p| p.len() == 2) else {
                continue;
            };
            let kept = chains[ki].clone();
            let deleted = chains
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ki)
                .map(|(_, p)| p.clone())
                .next_back()
                .unwrap();
            let t = *deleted.last().unwrap();
            let (x, y) = (kept[0], kept[1]);
            let out = g.without(&deleted.iter().copied().collect());
            let payload = json!({ "support": v, "kept": kept, "deleted": deleted });
            return Ok(Some(Reduction::new(
                out,
                (1, 1),
                "add_leaf",
                payload,
                move |_, _, s| {
                    let mut s = s.clone();
                    // the support must dominate t; move it out of the set
                    if s.remove(&v) {
                        debug_assert!(!s.contains(&y));
                        s.insert(y);
                    }
                    let _ = x;
                    s.insert(t);
                    Ok(s)
                },
            )));
        }
        Ok(None)
    }
}

/// `(x, u, v, w, y)` of the smallest applicable long-chain site.
pub fn long_chain_site(g: &Graph) -> Option<[VertexId; 5]> {
    let mut best: Option<[VertexId; 5]> = None;
    for v in g.vertices().filter(|&v| g.degree(v) == 2) {
        let nb = g.neighbors(v);
        if nb.iter().any(|&t| g.degree(t) != 2) {
            continue;
        }
        for (u, w) in [(nb[0], nb[1]), (nb[1], nb[0])] {
            let other = |a: VertexId, from: VertexId| {
                g.neighbors(a).iter().copied().find(|&t| t != from).unwrap()
            };
            let (x, y) = (other(u, v), other(w, v));
            if x == y
                || g.has_edge(x, y)
                || [u, v, w].contains(&x)
                || [u, v, w].contains(&y)
                || g.degree(y) < 2
            {
                continue;
            }
            let merged_nb = g
                .neighbors(x)
                .iter()
                .chain(g.neighbors(y))
                .any(|&t| ![x, y, u, w].contains(&t));
            if !merged_nb {
                continue;
            }
            let site = [x, u, v, w, y];
            if best.is_none_or(|b| site < b) {
                best = Some(site);
            }
        }
    }
    best
}

impl Rule for LongChain {
    fn id(&self) -> &'static str {
        "hs_long_chain"
    }
    fn problem(&self) -> Problem {
        P
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        let Some([x, u, v, w, y]) = long_chain_site(g) else {
            return Ok(None);
        };
        let mut b = g.builder();
        for t in [u, v, w] {
            b.remove_vertex(t);
        }
        let pair: VertexSet = [x, y].into_iter().collect();
        let z = b.merge(&pair);
        let out = b.build();
        let payload = json!({ "path": [x, u, v, w, y], "merged": z });
        let r = Reduction::new(
            out,
            (2, 2),
            "unfold_chain",
            payload,
            move |before, after, s| {
                let d = after.neighbors(z).iter().copied().find(|t| !s.contains(t));
                let d = d.ok_or_else(|| Error::InfeasibleLift {
                    rule: "hs_long_chain".into(),
                    reason: format!("merged vertex {z} has no dominator"),
                })?;
                let near_x = before.has_edge(d, x);
                let mut s = s.clone();
                let extra = if s.remove(&z) {
                    vec![x, y, if near_x { u } else { w }]
                } else {
                    vec![v, if near_x { u } else { w }]
                };
                s.extend(extra);
                Ok(s)
            },
        );
        Ok(Some(r.with_merge(z, pair)))
    }
}

pub fn rules() -> [&'static dyn Rule; 6] {
    [
        &Isolate,
        &Leaf,
        &FloatingChain,
        &CycleChain,
        &PendantChain,
        &LongChain,
    ]
}

/// The doubled graph with its long chains folded away.
#[derive(Clone, Debug)]
pub struct DoubledInstance {
    /// `H`: both copies, supports joined, leaves removed.
    pub doubled: Graph,
    /// Long Chain fixpoint of `H`, with the trace leading to it.
    pub host: Graph,
    pub folding: ReductionTrace,
    /// `f: V(G) -> V(G')`.
    pub copy: BTreeMap<VertexId, VertexId>,
    /// Number of long-chain steps.
    pub c: usize,
    /// Number of leaves of `G`.
    pub d: usize,
    /// Vertices of `G` with a leaf neighbor.
    pub supports: VertexSet,
}

pub fn build_doubled(g: &Graph) -> Result<DoubledInstance> {
    let supports: VertexSet = g
        .leaves()
        .iter()
        .map(|&l| g.neighbors(l)[0])
        .filter(|&s| g.degree(s) >= 2)
        .collect();
    let leaves = g.leaves();
    if leaves.len() != supports.len() || !g.isolates().is_empty() {
        return Err(Error::StructuralViolation(
            "reduced graph has a vertex with two leaves, an isolated edge or an isolate".into(),
        ));
    }
    let (union, copy) = g.disjoint_union(g, g.next_id());
    let mut b = union.builder();
    for &s in &supports {
        b.add_edge(s, copy[&s]);
    }
    for &l in &leaves {
        b.remove_vertex(l);
        b.remove_vertex(copy[&l]);
    }
    let doubled = b.build();
    if doubled.min_degree().is_some_and(|m| m < 2) {
        return Err(Error::StructuralViolation(
            "doubled graph has a vertex of degree < 2".into(),
        ));
    }
    let (host, folding) = run_to_fixpoint(&doubled, &[&LongChain], P, Measure::Size)?;
    debug_assert_eq!(doubled.n(), host.n() + 4 * folding.len());
    Ok(DoubledInstance {
        c: folding.len(),
        d: leaves.len(),
        doubled,
        host,
        folding,
        copy,
        supports,
    })
}

pub fn solve_harmless(g: &Graph, cfg: &OracleConfig) -> Result<Outcome> {
    let (reduced, trace) = run_to_fixpoint(g, &rules(), P, Measure::Size)?;
    let (tds, certificate, inner) = dominate_reduced(&reduced, cfg)?;
    let s: VertexSet = reduced.vertices().filter(|v| !tds.contains(v)).collect();
    let lifted = trace.lift(&s)?;
    let solution = Solution::new(P, g, lifted)?;
    Ok(Outcome {
        solution,
        trace,
        certificate,
        inner,
    })
}

/// Total dominating set of the reduced graph, within `(n_c + d_c) / 2` on
/// every component unless solved exactly.
fn dominate_reduced(
    g: &Graph,
    cfg: &OracleConfig,
) -> Result<(VertexSet, BoundCertificate, Option<BoundCertificate>)> {
    let kind = BoundKind::TdsHalf;
    if g.is_empty() {
        return Ok((
            VertexSet::new(),
            BoundCertificate::new(kind, Vec::new()),
            None,
        ));
    }
    let inst = build_doubled(g)?;
    let mut inner_comps = Vec::new();
    let mut dh_folded = VertexSet::new();
    for comp in inst.host.components() {
        let (d, cert) = match bounded::bounded_tds(&comp, cfg) {
            Ok(r) => r,
            Err(Error::PreconditionViolated(_)) => bounded::best_effort_tds(&comp, cfg)?,
            Err(e) => return Err(e),
        };
        inner_comps.extend(cert.components);
        dh_folded.extend(d);
    }
    let inner = BoundCertificate::new(kind, inner_comps);
    // unfold the long chains: lift the complement and complement back
    let s_folded: VertexSet = inst
        .host
        .vertices()
        .filter(|v| !dh_folded.contains(v))
        .collect();
    let s_h = inst.folding.lift(&s_folded)?;
    let dh: VertexSet = inst
        .doubled
        .vertices()
        .filter(|v| !s_h.contains(v))
        .collect();

    let mut all = VertexSet::new();
    let mut comps = Vec::new();
    for comp in g.component_sets() {
        let original: VertexSet = comp.iter().copied().filter(|v| dh.contains(v)).collect();
        let copied: VertexSet = comp
            .iter()
            .copied()
            .filter(|v| dh.contains(&inst.copy[v]))
            .collect();
        let mut d = if copied.len() < original.len() {
            copied
        } else {
            original
        };
        let sub = g.induced(&comp);
        let supports: Vec<VertexId> = inst
            .supports
            .iter()
            .copied()
            .filter(|s| comp.contains(s))
            .collect();
        d.extend(supports.iter().copied());
        for &x in &supports {
            if !sub.neighbors(x).iter().any(|t| d.contains(t)) {
                d.insert(sub.neighbors(x)[0]);
            }
        }
        if !oracle::verify_total_dominating(&sub, &d) {
            return Err(Error::StructuralViolation(format!(
                "lifted half does not totally dominate component {comp:?}"
            )));
        }
        let dc = supports.len() as i64;
        let target = (comp.len() as i64 + dc) / 2;
        let mut method = Method::Heuristic;
        if d.len() as i64 > target {
            match bounded::certified_cover(&sub, false, target) {
                Ok((found, m)) => (d, method) = (found, m),
                Err(Error::BoundNotCertified { .. }) if sub.n() <= cfg.bound => {
                    (d, method) = (oracle::exact_min_tds(&sub, cfg)?, Method::Exact)
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
