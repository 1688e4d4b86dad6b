//! Test corpora: every connected graph of a small order up to isomorphism,
//! and seeded random families.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, GraphBuilder, VertexId};

/// Orders above this are not enumerated exhaustively.
pub const MAX_EXHAUSTIVE: usize = 10;

/// Adjacency bitmasks over vertices `0..n`.
type Adj = Vec<u16>;

/// All connected graphs of order `n` up to isomorphism, on vertices
/// `1..=n` in canonical labeling, sorted by canonical code.
///
/// Built by adding a vertex with every nonempty neighbor set to each
/// connected graph of order `n - 1`; every connected graph has a vertex
/// whose removal keeps it connected, so nothing is missed.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    connected_codes(n)
        .iter()
        .map(|&c| from_code(n, c))
        .collect()
}

/// Counts by order, for reference: 1, 1, 2, 6, 21, 112, 853, 11117, 261080.
pub fn connected_codes(n: usize) -> Vec<u128> {
    assert!(
        (1..=MAX_EXHAUSTIVE).contains(&n),
        "order {n} not enumerable"
    );
    let mut level: Vec<u128> = vec![0];
    for order in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let adj = adjacency(order - 1, code);
            for nb in 1u16..(1 << (order - 1)) {
                let mut a = adj.clone();
                for (i, m) in a.iter_mut().enumerate() {
                    if nb >> i & 1 == 1 {
                        *m |= 1 << (order - 1);
                    }
                }
                a.push(nb);
                next.insert(canonical_code(&a));
            }
        }
        level = next.into_iter().collect();
    }
    level
}

fn pair_index(i: usize, j: usize) -> usize {
    // pairs (i, j), i < j, ordered by j then i
    j * (j - 1) / 2 + i
}

fn adjacency(n: usize, code: u128) -> Adj {
    let mut adj = vec![0u16; n];
    for j in 1..n {
        for i in 0..j {
            if code >> pair_index(i, j) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// The graph on `1..=n` with adjacency bitstring `code`.
pub fn from_code(n: usize, code: u128) -> Graph {
    let adj = adjacency(n, code);
    let mut edges = Vec::new();
    for (i, &m) in adj.iter().enumerate() {
        for j in i + 1..n {
            if m >> j & 1 == 1 {
                edges.push((i as VertexId + 1, j as VertexId + 1));
            }
        }
    }
    Graph::from_edges(n as u32, &edges)
}

/// Canonical code of a graph with at most 16 vertices: the maximum
/// adjacency bitstring over the leaves of an individualization-refinement
/// tree. Twins are interchangeable, so only one twin per cell is tried.
pub fn canonical_code(adj: &[u16]) -> u128 {
    let n = adj.len();
    assert!(n <= 16);
    if n == 0 {
        return 0;
    }
    let all = if n == 16 { u16::MAX } else { (1 << n) - 1 };
    let cells = refine(adj, vec![all]);
    let mut best = None;
    search(adj, cells, &mut best);
    best.unwrap_or(0)
}

/// Splits cells until every vertex in a cell has the same number of
/// neighbors in every cell. Cells are ordered by an isomorphism-invariant
/// key, so the result commutes with relabeling.
fn refine(adj: &[u16], mut cells: Vec<u16>) -> Vec<u16> {
    loop {
        let mut changed = false;
        let mut out = Vec::with_capacity(cells.len());
        for &cell in &cells {
            if cell.count_ones() == 1 {
                out.push(cell);
                continue;
            }
            let mut groups: Vec<(Vec<u32>, u16)> = Vec::new();
            let mut rest = cell;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let key: Vec<u32> = cells.iter().map(|&c| (adj[v] & c).count_ones()).collect();
                match groups.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, m)) => *m |= 1 << v,
                    None => groups.push((key, 1 << v)),
                }
            }
            if groups.len() > 1 {
                changed = true;
                groups.sort();
            }
            out.extend(groups.into_iter().map(|(_, m)| m));
        }
        cells = out;
        if !changed {
            return cells;
        }
    }
}

fn search(adj: &[u16], cells: Vec<u16>, best: &mut Option<u128>) {
    let Some(pos) = cells.iter().position(|c| c.count_ones() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let mut code = 0u128;
        for j in 1..order.len() {
            for i in 0..j {
                if adj[order[i]] >> order[j] & 1 == 1 {
                    code |= 1 << pair_index(i, j);
                }
            }
        }
        if best.is_none_or(|b| code > b) {
            *best = Some(code);
        }
        return;
    };
    let cell = cells[pos];
    let mut tried: Vec<usize> = Vec::new();
    let mut rest = cell;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let twin = tried
            .iter()
            .any(|&u| adj[u] & !(1 << v) == adj[v] & !(1 << u));
        if twin {
            continue;
        }
        tried.push(v);
        let mut next = cells.clone();
        next[pos] = cell & !(1 << v);
        next.insert(pos, 1 << v);
        search(adj, refine(adj, next), best);
    }
}

/// Canonical code of a [`Graph`] with at most 16 vertices.
pub fn graph_code(g: &Graph) -> u128 {
    let ids: Vec<VertexId> = g.vertices().collect();
    let adj: Adj = ids
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .fold(0u16, |m, w| m | 1 << ids.binary_search(w).unwrap())
        })
        .collect();
    canonical_code(&adj)
}

/// `G(n, p)` on vertices `1..=n`.
pub fn erdos_renyi(n: u32, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// A random spanning tree (each vertex attached to a uniformly chosen
/// earlier one, labels shuffled) plus every other pair with probability `p`.
pub fn random_connected(n: u32, p: f64, rng: &mut impl Rng) -> Graph {
    let mut label: Vec<VertexId> = (1..=n).collect();
    label.shuffle(rng);
    let mut b = GraphBuilder::new();
    for v in 1..=n {
        b.add_vertex_with_id(v);
    }
    for i in 1..n as usize {
        let j = rng.gen_range(0..i);
        b.add_edge(label[i], label[j]);
    }
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Random connected graph with an edge density drawn per instance, so a
/// batch mixes trees, sparse and dense graphs.
pub fn random_connected_mixed(n: u32, rng: &mut impl Rng) -> Graph {
    let p = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => rng.gen_range(0.0..2.0 / n.max(1) as f64),
        2 => rng.gen_range(0.05..0.3),
        _ => rng.gen_range(0.3..0.8),
    };
    random_connected(n, p, rng)
}

/// Small random graph from a mix of families: connected graphs of varied
/// density, near-trees, `G(n, p)` (possibly disconnected), and cycles with
/// pendant paths. Rule audits draw from this so chain and hair patterns
/// show up often.
pub fn random_small(n: u32, rng: &mut impl Rng) -> Graph {
    match rng.gen_range(0..4) {
        0 => random_connected_mixed(n, rng),
        1 => random_connected(n, rng.gen_range(0.0..1.5 / n.max(1) as f64), rng),
        2 => erdos_renyi(n, rng.gen_range(0.1..0.6), rng),
        _ => {
            let c = rng.gen_range(3.min(n)..=n);
            let mut b = GraphBuilder::new();
            for v in 1..=n {
                b.add_vertex_with_id(v);
            }
            for v in 1..c {
                b.add_edge(v, v + 1);
            }
            if c >= 3 {
                b.add_edge(c, 1);
            }
            for v in c + 1..=n {
                // mostly extend the previous vertex, so paths form
                let w = if rng.gen_bool(0.6) {
                    v - 1
                } else {
                    rng.gen_range(1..v)
                };
                b.add_edge(v, w);
            }
            b.build()
        }
    }
}

/// Uniform-ish random `d`-regular graph by the pairing model with restarts;
/// `None` when `n * d` is odd or no simple pairing was found.
pub fn random_regular(n: u32, d: u32, rng: &mut impl Rng) -> Option<Graph> {
    if (n * d) % 2 == 1 || d >= n {
        return None;
    }
    'attempt: for _ in 0..1000 {
        let mut points: Vec<VertexId> = (1..=n)
            .flat_map(|v| std::iter::repeat_n(v, d as usize))
            .collect();
        points.shuffle(rng);
        let mut b = GraphBuilder::new();
        for v in 1..=n {
            b.add_vertex_with_id(v);
        }
        for pair in points.chunks(2) {
            if !b.add_edge(pair[0], pair[1]) {
                continue 'attempt;
            }
        }
        return Some(b.build());
    }
    None
}

/// Random graph with minimum degree two in which no three consecutive
/// vertices have degree two. Starts sparse and adds edges at offending
/// vertices until both conditions hold.
pub fn random_condition_star(n: u32, rng: &mut impl Rng) -> Graph {
    assert!(n >= 4);
    let p = rng.gen_range(0.0..3.0 / n as f64);
    let g = random_connected(n, p, rng);
    let mut b = g.builder();
    let add_edge_at = |b: &mut GraphBuilder, v: VertexId, rng: &mut dyn rand::RngCore| {
        let cands: Vec<VertexId> = (1..=n)
            .filter(|&w| w != v && !b.neighbors(v).any(|x| x == w))
            .collect();
        let w = cands[rng.gen_range(0..cands.len())];
        b.add_edge(v, w);
    };
    loop {
        if let Some(v) = (1..=n).find(|&v| b.degree(v) < 2) {
            add_edge_at(&mut b, v, rng);
            continue;
        }
        let bad = (1..=n).find(|&v| {
            b.degree(v) == 2 && b.neighbors(v).filter(|&w| b.degree(w) == 2).count() == 2
        });
        match bad {
            Some(v) => add_edge_at(&mut b, v, rng),
            None => return b.build(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_codes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let g = erdos_renyi(9, 0.4, &mut rng);
            let mut perm: Vec<VertexId> = (1..=9).collect();
            perm.shuffle(&mut rng);
            let edges: Vec<_> = g
                .edges()
                .map(|(u, v)| (perm[u as usize - 1], perm[v as usize - 1]))
                .collect();
            let h = Graph::from_edges(9, &edges);
            assert_eq!(graph_code(&g), graph_code(&h));
        }
        assert_ne!(
            graph_code(&Graph::cycle(6)),
            graph_code(&Graph::from_edges(
                6,
                &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]
            ))
        );
    }

    #[test]
    fn generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 4..30 {
            assert!(random_connected_mixed(n, &mut rng).is_connected());
            let g = random_condition_star(n, &mut rng);
            assert!(crate::bounded::check_condition_star(&g).is_ok());
        }
        let g = random_regular(12, 3, &mut rng).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert!(random_regular(7, 3, &mut rng).is_none());
    }
}
