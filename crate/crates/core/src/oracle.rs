//! Exhaustive exact solvers and definition-level verifiers.
//!
//! These are ground truth for audits and acceptance checks. Minimization
//! oracles enumerate subsets by increasing cardinality, lexicographically
//! within one cardinality, and stop at the first feasible size.

use serde::{Deserialize, Serialize};

use crate::differential::RomanPartition;
use crate::error::{Error, Result};
use crate::graph::{Dense, Graph, VertexSet};
use crate::problem::{Problem, Solution};

pub fn verify_dominating(g: &Graph, d: &VertexSet) -> bool {
    g.vertices()
        .all(|x| d.contains(&x) || g.neighbors(x).iter().any(|y| d.contains(y)))
}

pub fn verify_total_dominating(g: &Graph, d: &VertexSet) -> bool {
    g.vertices()
        .all(|x| g.neighbors(x).iter().any(|y| d.contains(y)))
}

pub fn verify_k_dominating(g: &Graph, d: &VertexSet, k: usize) -> bool {
    g.vertices()
        .all(|x| d.contains(&x) || g.neighbors(x).iter().filter(|y| d.contains(y)).count() >= k)
}

/// `|N(S) \ S| - |S|`; vertices of `s` outside `g` are ignored.
pub fn differential_value(g: &Graph, s: &VertexSet) -> i64 {
    let s: VertexSet = s.iter().copied().filter(|&v| g.contains(v)).collect();
    let outside = g.open_neighborhood(&s).difference(&s).count();
    outside as i64 - s.len() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Largest order handled by the subset-enumeration solvers.
    pub bound: usize,
    /// Largest order for the pruned differential / Roman enumeration.
    pub differential_bound: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            bound: 20,
            differential_bound: 24,
        }
    }
}

fn check_size(g: &Graph, bound: usize) -> Result<()> {
    if g.n() > bound || g.n() > 64 {
        return Err(Error::TooLarge { n: g.n(), bound });
    }
    Ok(())
}

/// Finds the lexicographically first subset of the smallest cardinality
/// accepted by `accept`, where `accept` gets the chosen mask. `forced`
/// vertices are always included.
fn min_subset(n: usize, forced: u64, mut accept: impl FnMut(u64) -> bool) -> u64 {
    let free: Vec<usize> = (0..n).filter(|&i| forced >> i & 1 == 0).collect();
    let f = free.len();
    for size in 0..=f {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mask = idx.iter().fold(forced, |m, &i| m | 1 << free[i]);
            if accept(mask) {
                return mask;
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| idx[i] < i + f - size) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    unreachable!("the full vertex set is always accepted")
}

pub fn exact_min_ds(g: &Graph, cfg: &OracleConfig) -> Result<VertexSet> {
    check_size(g, cfg.bound)?;
    let d = Dense::new(g);
    let closed: Vec<u64> = d
        .masks()
        .iter()
        .enumerate()
        .map(|(i, m)| m | 1 << i)
        .collect();
    let all = full(d.n());
    let mask = min_subset(d.n(), 0, |s| union(&closed, s) == all);
    Ok(d.ids_of_mask(mask))
}

pub fn exact_min_tds(g: &Graph, cfg: &OracleConfig) -> Result<VertexSet> {
    check_size(g, cfg.bound)?;
    if let Some(v) = g.isolates().first() {
        return Err(Error::Infeasible(format!(
            "vertex {v} is isolated, so no total dominating set exists"
        )));
    }
    let d = Dense::new(g);
    let open = d.masks();
    let all = full(d.n());
    let mask = min_subset(d.n(), 0, |s| union(&open, s) == all);
    Ok(d.ids_of_mask(mask))
}

/// Vertices of degree below `k` are in every `k`-dominating set and are
/// forced up front; the full vertex set is always feasible.
pub fn exact_min_kds(g: &Graph, k: usize, cfg: &OracleConfig) -> Result<VertexSet> {
    check_size(g, cfg.bound)?;
    let d = Dense::new(g);
    let masks = d.masks();
    let forced = (0..d.n())
        .filter(|&i| d.adj[i].len() < k)
        .fold(0u64, |m, i| m | 1 << i);
    let mask = min_subset(d.n(), forced, |s| {
        (0..d.n()).all(|i| s >> i & 1 == 1 || (masks[i] & s).count_ones() as usize >= k)
    });
    Ok(d.ids_of_mask(mask))
}

/// A set maximizing `|N(S) \ S| - |S|`.
///
/// Depth-first over include/exclude decisions in id order. A vertex whose
/// whole neighborhood is already chosen is never included: dropping such a
/// vertex from any set never lowers the differential.
pub fn exact_max_differential(g: &Graph, cfg: &OracleConfig) -> Result<VertexSet> {
    check_size(g, cfg.differential_bound)?;
    let d = Dense::new(g);
    let masks = d.masks();
    let mut best = (0i64, 0u64);
    fn rec(i: usize, masks: &[u64], set: u64, nb: u64, best: &mut (i64, u64)) {
        if i == masks.len() {
            let val = (nb & !set).count_ones() as i64 - set.count_ones() as i64;
            if val > best.0 {
                *best = (val, set);
            }
            return;
        }
        if masks[i] & !set != 0 {
            rec(i + 1, masks, set | 1 << i, nb | masks[i], best);
        }
        rec(i + 1, masks, set, nb, best);
    }
    rec(0, &masks, 0, 0, &mut best);
    Ok(d.ids_of_mask(best.1))
}

/// Minimum-weight Roman domination function by enumerating the 2-labeled
/// set; the 1-labeled set is then forced to the undominated rest.
pub fn exact_roman(g: &Graph, cfg: &OracleConfig) -> Result<RomanPartition> {
    check_size(g, cfg.differential_bound)?;
    let d = Dense::new(g);
    let closed: Vec<u64> = d
        .masks()
        .iter()
        .enumerate()
        .map(|(i, m)| m | 1 << i)
        .collect();
    let n = d.n() as i64;
    let mut best = (n, 0u64);
    fn rec(i: usize, closed: &[u64], twos: u64, covered: u64, n: i64, best: &mut (i64, u64)) {
        if i == closed.len() {
            let w = 2 * twos.count_ones() as i64 + n - covered.count_ones() as i64;
            if w < best.0 {
                *best = (w, twos);
            }
            return;
        }
        rec(i + 1, closed, twos, covered, n, best);
        rec(i + 1, closed, twos | 1 << i, covered | closed[i], n, best);
    }
    rec(0, &closed, 0, 0, n, &mut best);
    let twos = best.1;
    let covered = union(&closed, twos);
    let all = full(d.n());
    Ok(RomanPartition {
        d0: d.ids_of_mask(covered & !twos),
        d1: d.ids_of_mask(all & !covered),
        d2: d.ids_of_mask(twos),
    })
}

/// Optimum solution of a maximization problem.
pub fn exact_optimum(problem: Problem, g: &Graph, cfg: &OracleConfig) -> Result<Solution> {
    let complement = |d: VertexSet| {
        g.vertices()
            .filter(|v| !d.contains(v))
            .collect::<VertexSet>()
    };
    let set = match problem {
        Problem::Nonblocker => complement(exact_min_ds(g, cfg)?),
        Problem::Harmless => complement(exact_min_tds(g, cfg)?),
        Problem::KNonblocker { k } => complement(exact_min_kds(g, k, cfg)?),
        Problem::Differential => exact_max_differential(g, cfg)?,
    };
    Solution::new(problem, g, set)
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn union(masks: &[u64], set: u64) -> u64 {
    let mut out = 0;
    let mut s = set;
    while s != 0 {
        let i = s.trailing_zeros() as usize;
        out |= masks[i];
        s &= s - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> VertexSet {
        v.iter().copied().collect()
    }

    const CFG: OracleConfig = OracleConfig {
        bound: 20,
        differential_bound: 24,
    };

    #[test]
    fn verifiers() {
        let c5 = Graph::cycle(5);
        assert!(verify_total_dominating(&c5, &set(&[1, 2, 3])));
        assert!(verify_dominating(&c5, &set(&[1, 3])));
        assert!(!verify_total_dominating(&c5, &set(&[1, 3])));
        assert!(verify_k_dominating(&Graph::complete(4), &set(&[1, 2]), 2));
        assert!(!verify_k_dominating(&Graph::complete(4), &set(&[1]), 2));
    }

    #[test]
    fn differential_values() {
        assert_eq!(differential_value(&Graph::star(4), &set(&[1])), 3);
        assert_eq!(differential_value(&Graph::petersen(), &VertexSet::new()), 0);
        assert_eq!(differential_value(&Graph::cycle(4), &set(&[1, 3])), 0);
    }

    #[test]
    fn small_optima() {
        assert_eq!(exact_min_tds(&Graph::cycle(6), &CFG).unwrap().len(), 4);
        assert_eq!(exact_min_ds(&Graph::cycle(4), &CFG).unwrap().len(), 2);
        assert_eq!(exact_min_ds(&Graph::cycle(7), &CFG).unwrap().len(), 3);
        assert_eq!(exact_min_tds(&Graph::path(5), &CFG).unwrap().len(), 3);
        assert_eq!(exact_min_tds(&Graph::petersen(), &CFG).unwrap().len(), 4);
        assert_eq!(
            exact_min_kds(&Graph::complete(4), 2, &CFG).unwrap().len(),
            2
        );
        assert_eq!(
            exact_min_kds(&Graph::complete_bipartite(3, 3), 2, &CFG)
                .unwrap()
                .len(),
            3
        );
        let p4 = exact_max_differential(&Graph::path(4), &CFG).unwrap();
        assert_eq!(differential_value(&Graph::path(4), &p4), 1);
        assert_eq!(exact_roman(&Graph::star(9), &CFG).unwrap().weight(), 2);
    }

    #[test]
    fn lexicographic_first_minimum() {
        // P3: {2} is the unique minimum dominating set; for C4, {1,2} comes first
        assert_eq!(exact_min_ds(&Graph::path(3), &CFG).unwrap(), set(&[2]));
        assert_eq!(exact_min_ds(&Graph::cycle(4), &CFG).unwrap(), set(&[1, 2]));
        assert_eq!(exact_min_tds(&Graph::cycle(4), &CFG).unwrap(), set(&[1, 2]));
    }

    #[test]
    fn kds_forces_low_degree_vertices() {
        let d = exact_min_kds(&Graph::star(3), 2, &CFG).unwrap();
        assert_eq!(d, set(&[2, 3, 4]));
    }

    #[test]
    fn tds_infeasible_and_too_large() {
        let g = Graph::from_edges(3, &[(1, 2)]);
        assert!(matches!(exact_min_tds(&g, &CFG), Err(Error::Infeasible(_))));
        let big = Graph::path(25);
        assert!(matches!(
            exact_min_ds(&big, &CFG),
            Err(Error::TooLarge { n: 25, bound: 20 })
        ));
    }
}
