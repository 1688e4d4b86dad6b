use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use domred::chains::{find_chains, ChainKind};
use domred::corpus;
use domred::io::{parse_graph, serialize_graph, Format};
use domred::oracle::{self, OracleConfig};
use domred::solve::solve;
use domred::{Graph, GraphBuilder, Problem, VertexSet};

fn arb_graph(max_n: u32) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = (n * (n - 1) / 2) as usize;
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), pairs),
                1u32..5,
            )
        })
        .prop_map(|(n, bits, stride)| {
            let mut b = GraphBuilder::new();
            for v in 1..=n {
                b.add_vertex_with_id(stride * v);
            }
            let mut i = 0;
            for u in 1..=n {
                for v in u + 1..=n {
                    if bits[i] {
                        b.add_edge(stride * u, stride * v);
                    }
                    i += 1;
                }
            }
            b.build()
        })
}

proptest! {
    #[test]
    fn io_round_trip(g in arb_graph(14)) {
        for f in [Format::Dimacs, Format::Edgelist] {
            let text = serialize_graph(&g, f);
            prop_assert_eq!(parse_graph(&text, f).unwrap(), g.clone());
        }
    }

    #[test]
    fn chain_interiors_partition_degree_two(g in arb_graph(14)) {
        let chains = find_chains(&g);
        let mut seen = VertexSet::new();
        for c in &chains {
            for &v in &c.interior {
                prop_assert_eq!(g.degree(v), 2);
                prop_assert!(seen.insert(v), "vertex {} in two chains", v);
            }
            // consecutive chain vertices are adjacent
            let vs = c.vertices();
            for w in vs.windows(2) {
                prop_assert!(g.has_edge(w[0], w[1]));
            }
            if let (Some(s), Some(e)) = (c.start, c.end) {
                prop_assert_ne!(g.degree(s), 2);
                prop_assert_ne!(g.degree(e), 2);
                prop_assert_eq!(c.kind == ChainKind::Cycle, s == e);
            }
        }
        let deg2: VertexSet = g.vertices().filter(|&v| g.degree(v) == 2).collect();
        prop_assert_eq!(seen, deg2);
    }

    #[test]
    fn pipelines_return_feasible_solutions(g in arb_graph(11)) {
        let cfg = OracleConfig::default();
        for p in [Problem::Nonblocker, Problem::Differential, Problem::KNonblocker { k: 2 }] {
            let out = solve(p, &g, &cfg).unwrap();
            prop_assert_eq!(p.value(&g, &out.solution.vertices), Some(out.solution.value));
        }
        if g.isolates().is_empty() {
            let out = solve(Problem::Harmless, &g, &cfg).unwrap();
            prop_assert_eq!(Problem::Harmless.value(&g, &out.solution.vertices), Some(out.solution.value));
        }
    }
}

#[test]
fn regular_four_graph_with_k3() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let g = corpus::random_regular(20, 4, &mut rng).expect("4-regular graph on 20 vertices");
    let p = Problem::KNonblocker { k: 3 };
    let out = solve(p, &g, &cfg).unwrap();
    let d = out.solution.complement(&g);
    assert!(oracle::verify_k_dominating(&g, &d, 3));
    let opt = oracle::exact_optimum(p, &g, &cfg).unwrap().value;
    assert!(4 * (out.solution.value + 3) >= opt);
}

#[test]
fn larger_instances_stay_feasible() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for n in [30u32, 45, 60] {
        let g = corpus::random_connected_mixed(n, &mut rng);
        for p in [
            Problem::Harmless,
            Problem::Nonblocker,
            Problem::Differential,
            Problem::KNonblocker { k: 2 },
        ] {
            let out = solve(p, &g, &cfg).unwrap();
            assert_eq!(
                p.value(&g, &out.solution.vertices),
                Some(out.solution.value),
                "{p} n={n}"
            );
        }
    }
}

#[test]
fn harmless_on_disconnected_graph() {
    let cfg = OracleConfig::default();
    let g = Graph::from_edges(
        11,
        &[
            (1, 2),
            (3, 4),
            (4, 5),
            (5, 3),
            (6, 7),
            (7, 8),
            (8, 9),
            (9, 10),
            (10, 11),
        ],
    );
    let out = solve(Problem::Harmless, &g, &cfg).unwrap();
    let opt = oracle::exact_optimum(Problem::Harmless, &g, &cfg)
        .unwrap()
        .value;
    assert!(2 * out.solution.value >= opt);
}

#[test]
fn trace_lift_matches_reported_value() {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let g = corpus::random_small(12, &mut rng);
        let out = solve(Problem::Nonblocker, &g, &cfg).unwrap();
        // lifting the reduced optimum yields exactly opt' + b
        let reduced = out.trace.final_graph();
        let opt_r = oracle::exact_optimum(Problem::Nonblocker, reduced, &cfg).unwrap();
        let lifted = out.trace.lift(&opt_r.vertices).unwrap();
        let v = Problem::Nonblocker.value(&g, &lifted).unwrap();
        assert_eq!(v, opt_r.value + out.trace.total_b());
    }
}
