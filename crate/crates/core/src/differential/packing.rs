//! Big star packings on a mixed graph, and local search on differential
//! sets.
//!
//! Every vertex has at most one outgoing arc and no vertex with an incoming
//! arc has an outgoing one. Centers `D` receive arcs, ray tips `B(D)` send
//! one, and `∂(D) = |B(D)| - |D|`.

use crate::graph::{Graph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Undirected,
    Toward(VertexId),
}

#[derive(Clone, Debug)]
pub struct StarPacking {
    ids: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    out: Vec<Option<usize>>,
    inc: Vec<Vec<usize>>,
}

impl StarPacking {
    /// All edges undirected.
    pub fn new(g: &Graph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index = |v: VertexId| ids.binary_search(&v).unwrap();
        let adj = ids
            .iter()
            .map(|&v| g.neighbors(v).iter().map(|&w| index(w)).collect())
            .collect();
        let n = ids.len();
        StarPacking {
            ids,
            adj,
            out: vec![None; n],
            inc: vec![Vec::new(); n],
        }
    }

    fn index(&self, v: VertexId) -> usize {
        self.ids
            .binary_search(&v)
            .expect("vertex of the host graph")
    }

    pub fn orientation(&self, u: VertexId, v: VertexId) -> Orientation {
        let (i, j) = (self.index(u), self.index(v));
        if self.out[i] == Some(j) {
            Orientation::Toward(v)
        } else if self.out[j] == Some(i) {
            Orientation::Toward(u)
        } else {
            Orientation::Undirected
        }
    }

    fn marked(&self, i: usize) -> bool {
        self.out[i].is_some() || !self.inc[i].is_empty()
    }

    fn class(&self, pred: impl Fn(usize) -> bool) -> VertexSet {
        (0..self.ids.len())
            .filter(|&i| pred(i))
            .map(|i| self.ids[i])
            .collect()
    }

    pub fn centers(&self) -> VertexSet {
        self.class(|i| !self.inc[i].is_empty())
    }

    pub fn rays(&self) -> VertexSet {
        self.class(|i| self.out[i].is_some())
    }

    pub fn rest(&self) -> VertexSet {
        self.class(|i| !self.marked(i))
    }

    pub fn differential(&self) -> i64 {
        let b = self.out.iter().filter(|o| o.is_some()).count() as i64;
        let d = self.inc.iter().filter(|r| !r.is_empty()).count() as i64;
        b - d
    }

    /// Arc invariants, big stars, and no edge between `D` and `C(D)`.
    pub fn check(&self) -> std::result::Result<(), String> {
        for i in 0..self.ids.len() {
            if self.out[i].is_some() && !self.inc[i].is_empty() {
                return Err(format!("{} has incoming and outgoing arcs", self.ids[i]));
            }
            if let Some(j) = self.out[i] {
                if !self.inc[j].contains(&i) || !self.adj[i].contains(&j) {
                    return Err(format!(
                        "arc {} -> {} is inconsistent",
                        self.ids[i], self.ids[j]
                    ));
                }
            }
            if !self.inc[i].is_empty() {
                if self.inc[i].len() < 2 {
                    return Err(format!("center {} has a single ray", self.ids[i]));
                }
                if let Some(&j) = self.adj[i].iter().find(|&&j| !self.marked(j)) {
                    return Err(format!(
                        "center {} touches unmarked {}",
                        self.ids[i], self.ids[j]
                    ));
                }
            }
        }
        Ok(())
    }

    /// `G[C(D)]` has only `K1` and `K2` components.
    pub fn rest_is_matching(&self) -> bool {
        (0..self.ids.len())
            .filter(|&i| !self.marked(i))
            .all(|i| self.adj[i].iter().filter(|&&j| !self.marked(j)).count() <= 1)
    }

    fn unmarked_neighbors(&self, i: usize) -> Vec<usize> {
        self.adj[i]
            .iter()
            .copied()
            .filter(|&j| !self.marked(j))
            .collect()
    }

    fn make_center(&mut self, x: usize) {
        for j in self.unmarked_neighbors(x) {
            self.out[j] = Some(x);
            self.inc[x].push(j);
        }
    }

    fn drop_arc(&mut self, i: usize) {
        if let Some(j) = self.out[i].take() {
            self.inc[j].retain(|&t| t != i);
        }
    }

    /// Detaches ray `x`; a center left with one ray is dissolved.
    fn detach(&mut self, x: usize) {
        let Some(y) = self.out[x] else { return };
        self.drop_arc(x);
        if self.inc[y].len() == 1 {
            let z = self.inc[y][0];
            self.drop_arc(z);
        }
    }

    /// Unmarked vertices next to a center become its rays.
    fn absorb(&mut self) {
        for j in 0..self.ids.len() {
            if self.marked(j) {
                continue;
            }
            if let Some(&c) = self.adj[j].iter().find(|&&c| !self.inc[c].is_empty()) {
                self.out[j] = Some(c);
                self.inc[c].push(j);
            }
        }
    }

    /// Greedy: repeatedly the unmarked vertex with most unmarked neighbors
    /// (at least two, ties by id) becomes a center.
    pub fn greedy(&mut self) -> bool {
        let mut changed = false;
        loop {
            let best = (0..self.ids.len())
                .filter(|&i| !self.marked(i))
                .map(|i| (self.unmarked_neighbors(i).len(), i))
                .filter(|&(c, _)| c >= 2)
                .max_by_key(|&(c, i)| (c, std::cmp::Reverse(i)));
            let Some((_, x)) = best else { return changed };
            self.make_center(x);
            changed = true;
            debug_assert_eq!(self.check(), Ok(()));
        }
    }

    /// A ray tip with two or more unmarked neighbors becomes a center.
    pub fn first_improvement(&mut self) -> bool {
        let site = (0..self.ids.len())
            .find(|&x| self.out[x].is_some() && self.unmarked_neighbors(x).len() >= 2);
        let Some(x) = site else { return false };
        self.detach(x);
        self.make_center(x);
        self.absorb();
        debug_assert_eq!(self.check(), Ok(()));
        true
    }

    /// Ray tips next to a `K2` of `C(D)` whose star has only two rays.
    fn dif3_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.ids.len() {
            let Some(y) = self.out[x] else { continue };
            if self.inc[y].len() >= 3 {
                continue;
            }
            for &a in &self.adj[x] {
                if !self.marked(a) && self.unmarked_neighbors(a).len() == 1 {
                    out.push((x, a));
                }
            }
        }
        out
    }

    /// Every ray tip has at most one neighbor in `C(D)`.
    pub fn dif2(&self) -> bool {
        (0..self.ids.len()).all(|x| self.out[x].is_none() || self.unmarked_neighbors(x).len() <= 1)
    }

    /// Every ray tip next to a `K2` of `C(D)` lies on a star with at least
    /// three rays.
    pub fn dif3(&self) -> bool {
        self.dif3_violations().is_empty()
    }

    fn settle(&mut self) {
        self.greedy();
        while self.first_improvement() {
            self.greedy();
        }
    }

    /// Re-centres a two-ray star on a ray tip `x` next to a `K2` `{a, b}`:
    /// either `x` or `a` becomes a center. Kept only if the packing, after
    /// re-running greedy and the first improvement, has a larger
    /// differential.
    pub fn second_improvement(&mut self) -> bool {
        let base = self.differential();
        for (x, a) in self.dif3_violations() {
            let mut best: Option<StarPacking> = None;
            for center in [x, a] {
                let mut trial = self.clone();
                trial.detach(x);
                if trial.unmarked_neighbors(center).len() < 2 {
                    continue;
                }
                trial.make_center(center);
                trial.absorb();
                trial.settle();
                let better = best.as_ref().map_or(base, |b| b.differential());
                if trial.differential() > better {
                    best = Some(trial);
                }
            }
            if let Some(b) = best {
                *self = b;
                debug_assert_eq!(self.check(), Ok(()));
                return true;
            }
        }
        false
    }

    /// Greedy, then both improvements until neither applies.
    pub fn build(g: &Graph) -> Self {
        let mut p = StarPacking::new(g);
        loop {
            p.settle();
            if !p.second_improvement() {
                return p;
            }
        }
    }
}

/// Strict-gain local search on a differential set: adds, removals, and
/// swaps within distance two, until none improves `∂`.
pub fn local_search(g: &Graph, s: &VertexSet) -> VertexSet {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    let index = |v: VertexId| ids.binary_search(&v).unwrap();
    let adj: Vec<Vec<usize>> = ids
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|&w| index(w)).collect())
        .collect();
    let mut ins = vec![false; n];
    let mut cnt = vec![0u32; n];
    for &v in s {
        if let Ok(i) = ids.binary_search(&v) {
            ins[i] = true;
            for &j in &adj[i] {
                cnt[j] += 1;
            }
        }
    }
    let add_gain = |ins: &[bool], cnt: &[u32], x: usize| -> i64 {
        let fresh = adj[x].iter().filter(|&&w| !ins[w] && cnt[w] == 0).count() as i64;
        fresh - 1 - (cnt[x] > 0) as i64
    };
    let remove_gain = |ins: &[bool], cnt: &[u32], x: usize| -> i64 {
        let lost = adj[x].iter().filter(|&&w| !ins[w] && cnt[w] == 1).count() as i64;
        1 + (cnt[x] > 0) as i64 - lost
    };
    let toggle = |ins: &mut Vec<bool>, cnt: &mut Vec<u32>, x: usize| {
        ins[x] = !ins[x];
        for &j in &adj[x] {
            if ins[x] {
                cnt[j] += 1;
            } else {
                cnt[j] -= 1;
            }
        }
    };
    loop {
        let mut improved = false;
        for x in 0..n {
            let gain = if ins[x] {
                remove_gain(&ins, &cnt, x)
            } else {
                add_gain(&ins, &cnt, x)
            };
            if gain > 0 {
                toggle(&mut ins, &mut cnt, x);
                improved = true;
            }
        }
        if improved {
            continue;
        }
        'swap: for x in 0..n {
            if !ins[x] {
                continue;
            }
            let out_gain = remove_gain(&ins, &cnt, x);
            toggle(&mut ins, &mut cnt, x);
            let mut near: Vec<usize> = adj[x]
                .iter()
                .flat_map(|&j| std::iter::once(j).chain(adj[j].iter().copied()))
                .collect();
            near.sort_unstable();
            near.dedup();
            for y in near {
                if y != x && !ins[y] && out_gain + add_gain(&ins, &cnt, y) > 0 {
                    toggle(&mut ins, &mut cnt, y);
                    improved = true;
                    break 'swap;
                }
            }
            toggle(&mut ins, &mut cnt, x);
        }
        if !improved {
            break;
        }
    }
    (0..n).filter(|&i| ins[i]).map(|i| ids[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{differential_value, exact_max_differential, OracleConfig};

    #[test]
    fn greedy_on_small_graphs() {
        let p = StarPacking::build(&Graph::cycle(5));
        assert_eq!(
            (p.centers().len(), p.rays().len(), p.differential()),
            (1, 2, 1)
        );
        let p = StarPacking::build(&Graph::complete(4));
        assert_eq!(p.differential(), 2);
        assert_eq!(p.orientation(2, 1), Orientation::Toward(1));
        assert_eq!(p.orientation(2, 3), Orientation::Undirected);
    }

    #[test]
    fn packing_value_matches_center_set() {
        for g in [
            Graph::petersen(),
            Graph::cycle(11),
            Graph::complete_bipartite(3, 4),
        ] {
            let p = StarPacking::build(&g);
            p.check().unwrap();
            assert!(p.rest_is_matching() && p.dif2());
            assert_eq!(p.differential(), differential_value(&g, &p.centers()));
        }
    }

    #[test]
    fn petersen_reaches_three() {
        let g = Graph::petersen();
        let p = StarPacking::build(&g);
        let s = local_search(&g, &p.centers());
        assert!(differential_value(&g, &s) >= 3);
        let opt = differential_value(
            &g,
            &exact_max_differential(&g, &OracleConfig::default()).unwrap(),
        );
        assert!(differential_value(&g, &s) <= opt);
    }

    #[test]
    fn local_search_never_worsens() {
        let g = Graph::path(9);
        let s: VertexSet = [1, 5, 9].into_iter().collect();
        let t = local_search(&g, &s);
        assert!(differential_value(&g, &t) >= differential_value(&g, &s));
        assert!(differential_value(&g, &local_search(&g, &VertexSet::new())) >= 2);
    }
}
