use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use domred::bounded::{bounded_tds, BoundCertificate, Method};
use domred::corpus::{self, connected_codes, from_code};
use domred::io::{parse_graph, serialize_graph, Format};
use domred::oracle::{self, OracleConfig};
use domred::solve::{audit_random, rules, solve};
use domred::{Graph, GraphBuilder, Problem};

const PROBLEMS: [Problem; 5] = [
    Problem::Harmless,
    Problem::Nonblocker,
    Problem::Differential,
    Problem::KNonblocker { k: 2 },
    Problem::KNonblocker { k: 3 },
];

fn codes(n: usize) -> &'static [u128] {
    static CACHE: [OnceLock<Vec<u128>>; 10] = [const { OnceLock::new() }; 10];
    CACHE[n].get_or_init(|| connected_codes(n))
}

fn exhaustive(lo: usize, hi: usize) -> impl Iterator<Item = Graph> {
    (lo..=hi).flat_map(|n| codes(n).iter().map(move |&c| from_code(n, c)))
}

fn random(ns: std::ops::RangeInclusive<u32>, per: usize, seed: u64) -> impl Iterator<Item = Graph> {
    ns.flat_map(move |n| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
        (0..per).map(move |_| corpus::random_connected_mixed(n, &mut rng))
    })
}

struct Tally {
    checked: usize,
    violations: Vec<String>,
    /// Violations on instances whose optimum already misses the bound.
    unattainable: usize,
}

enum Check {
    Ok,
    Fail,
    Unattainable,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            violations: Vec::new(),
            unattainable: 0,
        }
    }
    fn fail(&mut self, msg: String) {
        if self.violations.len() < 5 {
            eprintln!("  violation: {msg}");
        }
        self.violations.push(msg);
    }
    fn detail(&self) -> String {
        let mut s = format!(
            "{} instances, {} violations",
            self.checked,
            self.violations.len()
        );
        if self.unattainable > 0 {
            s += &format!(
                ", {} of them where the exact optimum misses the bound",
                self.unattainable
            );
        }
        s
    }
    fn ok(&self) -> bool {
        self.checked > 0 && self.violations.is_empty()
    }
    /// Failures not explained by an unattainable bound.
    fn regressions(&self) -> usize {
        self.violations.len() - self.unattainable
    }
    fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.unattainable += other.unattainable;
    }
}

/// Certificate components of order at least 8 must be within the bound. A
/// miss on a component solved to optimality cannot be repaired.
fn large_components_within(c: Option<&BoundCertificate>) -> Check {
    let Some(c) = c else { return Check::Ok };
    let misses: Vec<_> = c
        .components
        .iter()
        .filter(|b| b.n >= 8 && !b.within())
        .collect();
    if misses.is_empty() {
        Check::Ok
    } else if misses.iter().all(|b| b.method == Method::Exact) {
        Check::Unattainable
    } else {
        Check::Fail
    }
}

fn ratio_check(
    problem: Problem,
    graphs: impl Iterator<Item = Graph>,
    cfg: &OracleConfig,
    certificate_check: impl Fn(&domred::solve::Outcome) -> Check,
) -> Tally {
    let mut t = Tally::new();
    for g in graphs {
        t.checked += 1;
        let out = match solve(problem, &g, cfg) {
            Ok(o) => o,
            Err(e) => {
                t.fail(format!("{problem} on {g:?}: {e}"));
                continue;
            }
        };
        let value = out.solution.value;
        if problem.value(&g, &out.solution.vertices) != Some(value) {
            t.fail(format!("{problem} infeasible or misreported on {g:?}"));
            continue;
        }
        let opt = oracle::exact_optimum(problem, &g, cfg).unwrap().value;
        if !problem.meets_guarantee(value, opt) {
            t.fail(format!("{problem} value {value} opt {opt} on {g:?}"));
        }
        match certificate_check(&out) {
            Check::Ok => {}
            Check::Fail => t.fail(format!("{problem} certificate out of bound on {g:?}")),
            Check::Unattainable => {
                t.unattainable += 1;
                t.fail(format!(
                    "{problem} certificate out of bound, optimum included, on {g:?}"
                ));
            }
        }
    }
    t
}

fn criterion_1(cfg: &OracleConfig) -> Tally {
    let graphs = exhaustive(2, 9).chain(random(10..=18, 300, 1));
    let mut t = ratio_check(Problem::Harmless, graphs, cfg, |_| Check::Ok);
    // the factor itself, restated without meets_guarantee
    for g in exhaustive(2, 6) {
        let out = solve(Problem::Harmless, &g, cfg).unwrap();
        let gt = oracle::exact_min_tds(&g, cfg).unwrap().len() as i64;
        if 2 * out.solution.value < g.n() as i64 - gt {
            t.fail(format!("2|S| < n - gamma_t on {g:?}"));
        }
    }
    t
}

fn criterion_2(cfg: &OracleConfig) -> Tally {
    let mut t = Tally::new();
    for n in 8..=40u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(2_000 + n as u64);
        for _ in 0..1000 {
            let g = corpus::random_condition_star(n, &mut rng);
            t.checked += 1;
            match bounded_tds(&g, cfg) {
                Ok((d, _)) => {
                    if !oracle::verify_total_dominating(&g, &d) || 2 * d.len() > g.n() {
                        t.fail(format!("|D| = {} on n = {}: {g:?}", d.len(), g.n()));
                    }
                }
                Err(e) => t.fail(format!("{e} on {g:?}")),
            }
        }
    }
    t
}

fn criterion_3(cfg: &OracleConfig) -> Tally {
    let graphs = exhaustive(2, 9).chain(random(10..=18, 300, 3));
    ratio_check(Problem::Nonblocker, graphs, cfg, |o| {
        large_components_within(o.inner.as_ref())
    })
}

fn criterion_4(cfg: &OracleConfig) -> Tally {
    let graphs = exhaustive(3, 9).chain(random(10..=16, 300, 4));
    ratio_check(Problem::Differential, graphs, cfg, |o| {
        large_components_within(Some(&o.certificate))
    })
}

fn criterion_5(cfg: &OracleConfig) -> Tally {
    let mut t = Tally::new();
    for k in [2, 3] {
        let graphs = exhaustive(3, 8).chain(random(9..=18, 200, 5 + k as u64));
        let part = ratio_check(Problem::KNonblocker { k }, graphs, cfg, |o| {
            if o.certificate.additive_slack == k as i64 {
                Check::Ok
            } else {
                Check::Fail
            }
        });
        t.absorb(part);
    }
    t
}

fn criterion_6(cfg: &OracleConfig) -> Tally {
    let mut t = Tally::new();
    for problem in PROBLEMS {
        for (i, rule) in rules(problem).iter().enumerate() {
            let seed = 6_000 + 97 * i as u64 + problem.k().unwrap_or(0) as u64;
            let audit = audit_random(rule.as_ref(), 500, 10, seed, 200_000, cfg);
            t.checked += 1;
            if !audit.passed(500) {
                t.fail(format!(
                    "{} ({}): applied {} of {} draws, failures {:?}",
                    audit.rule_id,
                    audit.problem,
                    audit.applied,
                    audit.attempts,
                    audit.failures.iter().take(2).collect::<Vec<_>>()
                ));
            }
        }
    }
    eprintln!("  audited {} rules", t.checked);
    t
}

fn brute_max(problem: Problem, g: &Graph) -> Option<i64> {
    let vs: Vec<_> = g.vertices().collect();
    (0u32..1 << vs.len())
        .filter_map(|mask| {
            let s = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            problem.value(g, &s)
        })
        .max()
}

fn criterion_7(cfg: &OracleConfig) -> Tally {
    let mut t = Tally::new();
    for g in exhaustive(1, 7) {
        let n = g.n() as i64;
        let mut expected = vec![
            (
                Problem::Nonblocker,
                Some(n - oracle::exact_min_ds(&g, cfg).unwrap().len() as i64),
            ),
            (Problem::Differential, {
                let r = oracle::exact_roman(&g, cfg).unwrap();
                Some(n - (r.d1.len() + 2 * r.d2.len()) as i64)
            }),
        ];
        if g.n() >= 2 {
            let gt = oracle::exact_min_tds(&g, cfg).unwrap().len() as i64;
            expected.push((Problem::Harmless, Some(n - gt)));
        }
        for k in [2, 3] {
            let gk = oracle::exact_min_kds(&g, k, cfg).unwrap().len() as i64;
            expected.push((Problem::KNonblocker { k }, Some(n - gk)));
        }
        for (problem, want) in expected {
            t.checked += 1;
            let got = brute_max(problem, &g);
            if got != want {
                t.fail(format!(
                    "{problem}: brute {got:?} vs dual {want:?} on {g:?}"
                ));
            }
        }
    }
    t
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_domred"))
        .args(args)
        .output()
        .expect("binary runs");
    let mut bytes = out.stdout;
    bytes.extend(format!("\nexit {:?}\n", out.status.code()).as_bytes());
    bytes
}

fn relabel(g: &Graph, offset: u32) -> Graph {
    let mut b = GraphBuilder::new();
    for v in g.vertices() {
        b.add_vertex_with_id(3 * v + offset);
    }
    for (u, v) in g.edges() {
        b.add_edge(3 * u + offset, 3 * v + offset);
    }
    b.build()
}

fn criterion_8() -> Tally {
    let mut t = Tally::new();
    let dir = std::env::temp_dir().join(format!("domred-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("petersen.dimacs");
    std::fs::write(&input, serialize_graph(&Graph::petersen(), Format::Dimacs)).unwrap();
    let input = input.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "bench",
            "--problem",
            "harmless",
            "--sizes",
            "8..11",
            "--per-size",
            "4",
            "--seed",
            "11",
            "--no-timing",
        ],
        vec![
            "bench",
            "--problem",
            "differential",
            "--sizes",
            "9",
            "--per-size",
            "6",
            "--seed",
            "3",
            "--no-timing",
        ],
        vec![
            "bench",
            "--problem",
            "knonblocker",
            "--k",
            "2",
            "--sizes",
            "8..10",
            "--per-size",
            "3",
            "--seed",
            "5",
            "--no-timing",
        ],
        vec![
            "solve",
            "--problem",
            "nonblocker",
            "--input",
            input,
            "--exact",
            "--json",
            "--seed",
            "9",
            "--no-timing",
        ],
        vec![
            "solve",
            "--problem",
            "harmless",
            "--input",
            input,
            "--json",
            "--seed",
            "9",
            "--no-timing",
        ],
        vec![
            "generate", "--family", "er", "--n", "12", "--p", "0.3", "--seed", "4",
        ],
        vec![
            "audit",
            "--problem",
            "nonblocker",
            "--samples",
            "20",
            "--max-n",
            "8",
            "--seed",
            "2",
        ],
    ];
    for args in &invocations {
        t.checked += 1;
        let first = run_cli(args);
        if !first.ends_with(b"exit Some(0)\n") {
            t.fail(format!("nonzero exit: {}", args.join(" ")));
        } else if first != run_cli(args) {
            t.fail(format!("output differs across runs: {}", args.join(" ")));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);

    let mut round_trip = |g: &Graph| {
        for f in [Format::Dimacs, Format::Edgelist] {
            t.checked += 1;
            let text = serialize_graph(g, f);
            match parse_graph(&text, f) {
                Ok(h) if h == *g && serialize_graph(&h, f) == text => {}
                Ok(h) => t.fail(format!("{f:?} round trip changed {g:?} into {h:?}")),
                Err(e) => t.fail(format!("{f:?} round trip failed on {g:?}: {e}")),
            }
        }
    };
    for g in exhaustive(1, 7) {
        round_trip(&g);
        round_trip(&relabel(&g, 2));
    }
    for g in random(10..=18, 20, 8) {
        round_trip(&g);
    }
    t
}

type Criterion = fn(&OracleConfig) -> Tally;

fn main() {
    let cfg = OracleConfig::default();
    let criteria: [(&str, Criterion); 8] = [
        ("harmless set within factor 2", criterion_1),
        ("bounded total domination within n/2", criterion_2),
        ("nonblocker within factor 5/3", criterion_3),
        ("differential within factor 11/3", criterion_4),
        ("k-nonblocker within factor k+1 minus k", criterion_5),
        ("per-rule audits", criterion_6),
        ("duality identities", criterion_7),
        ("determinism and round trips", |_| criterion_8()),
    ];
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let t = run(&cfg);
        let verdict = if t.ok() { "PASS" } else { "FAIL" };
        if t.regressions() > 0 {
            failed += 1;
        }
        println!(
            "criterion {}: {verdict} {name} ({}, {:.1}s)",
            i + 1,
            t.detail(),
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
