//! The `domred` command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 infeasible instance,
//! 3 bound not certified, 4 a checked property failed (claimed solution
//! infeasible, audit violation), 5 internal error.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::corpus;
use crate::error::Error;
use crate::graph::{Graph, VertexSet};
use crate::io::{parse_graph, serialize_graph, Format};
use crate::oracle::{self, OracleConfig};
use crate::problem::Problem;
use crate::solve;

#[derive(Parser, Debug)]
#[command(
    name = "domred",
    version,
    about = "Reduction-based approximation for domination-type maximization problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one instance and print the result.
    Solve(SolveArgs),
    /// Check a claimed solution against a graph.
    Verify(VerifyArgs),
    /// Run only the reduction rules and print the trace.
    Reduce(ReduceArgs),
    /// Audit every rule of a problem on a seeded random corpus.
    Audit(AuditArgs),
    /// Solve a seeded random corpus and print one CSV row per instance.
    Bench(BenchArgs),
    /// Write a random graph, or all connected graphs of one order.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ProblemArg {
    Nonblocker,
    Harmless,
    Differential,
    Knonblocker,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Dimacs,
    Edgelist,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dimacs => Format::Dimacs,
            FormatArg::Edgelist => Format::Edgelist,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ProblemOpts {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Required for knonblocker.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct InputOpts {
    /// Graph file; standard input when absent or `-`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Defaults to dimacs for `.dimacs`, `.col` and `.dim` files, else edgelist.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemOpts,
    #[command(flatten)]
    pub input: InputOpts,
    /// Solve with the exact oracle instead of the pipeline.
    #[arg(long)]
    pub exact: bool,
    /// Also compute the exact optimum and the achieved ratio.
    #[arg(long)]
    pub compare: bool,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Write the reduction trace as JSON.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Write the solution file ({problem, k?, vertices}).
    #[arg(long)]
    pub solution_out: Option<PathBuf>,
    /// Accepted for interface stability; the pipelines are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report runtime_ms as 0.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long, default_value_t = OracleConfig::default().bound)]
    pub oracle_bound: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputOpts,
    /// Solution file: {problem, k?, vertices} (or `solution` in place of
    /// `vertices`, as printed by `solve`).
    #[arg(long)]
    pub solution: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub problem: ProblemOpts,
    #[command(flatten)]
    pub input: InputOpts,
    /// Write the reduced graph in the input format.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub problem: ProblemOpts,
    /// Graphs per rule on which the rule applies.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 10)]
    pub max_n: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub problem: ProblemOpts,
    /// Orders as `a..b` (inclusive) or a single number.
    #[arg(long, default_value = "8..16")]
    pub sizes: String,
    #[arg(long, default_value_t = 10)]
    pub per_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report the ms column as 0.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Er,
    Regular,
    Connected,
    ConditionStar,
    /// Every connected graph of order `n`.
    All,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "er")]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
    /// Edge probability for `er` and `connected`.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Degree for `regular`.
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: FormatArg,
    /// Directory for `all`; one file per graph.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            kind: "usage",
            message: message.into(),
        }
    }

    fn io(e: std::io::Error, path: &Path) -> Self {
        Failure::usage(format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (1, "parse"),
            Error::TooLarge { .. } => (1, "too_large"),
            Error::PreconditionViolated(_) => (1, "precondition"),
            Error::InfeasibleInstance(_) => (2, "infeasible_instance"),
            Error::BoundNotCertified { .. } => (3, "bound_not_certified"),
            Error::Infeasible(_) => (4, "infeasible"),
            Error::AuditFailure { .. } => (4, "audit_failure"),
            Error::InfeasibleLift { .. } => (5, "infeasible_lift"),
            Error::StructuralViolation(_) => (5, "structural_violation"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first) and runs the command, writing data
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let f = Failure::usage(e.render().to_string().trim().to_string());
            report(err, &f);
            return f.code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Reduce(a) => cmd_reduce(a, out),
        Command::Audit(a) => cmd_audit(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Generate(a) => cmd_generate(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            report(err, &f);
            f.code
        }
    }
}

fn report(err: &mut dyn Write, f: &Failure) {
    let obj = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
    let _ = writeln!(err, "{obj}");
}

fn problem_of(p: &ProblemOpts) -> Result<Problem, Failure> {
    match (p.problem, p.k) {
        (ProblemArg::Knonblocker, Some(k)) if k >= 2 => Ok(Problem::KNonblocker { k }),
        (ProblemArg::Knonblocker, Some(k)) => {
            Err(Failure::usage(format!("--k must be at least 2, got {k}")))
        }
        (ProblemArg::Knonblocker, None) => Err(Failure::usage("--k is required for knonblocker")),
        (_, Some(_)) => Err(Failure::usage("--k is only valid with knonblocker")),
        (ProblemArg::Nonblocker, None) => Ok(Problem::Nonblocker),
        (ProblemArg::Harmless, None) => Ok(Problem::Harmless),
        (ProblemArg::Differential, None) => Ok(Problem::Differential),
    }
}

fn format_of(opts: &InputOpts) -> Format {
    if let Some(f) = opts.format {
        return f.into();
    }
    let ext = opts
        .input
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| e.to_str())
        .unwrap_or("");
    match ext {
        "dimacs" | "col" | "dim" => Format::Dimacs,
        _ => Format::Edgelist,
    }
}

fn read_graph(opts: &InputOpts) -> Result<Graph, Failure> {
    let text = match &opts.input {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::io(e, p))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(parse_graph(&text, format_of(opts)).map_err(Error::from)?)
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    std::fs::write(path, contents).map_err(|e| Failure::io(e, path))
}

fn emit(out: &mut dyn Write, line: &str) -> Outcome {
    writeln!(out, "{line}").map_err(|e| Failure {
        code: 5,
        kind: "io",
        message: e.to_string(),
    })
}

fn oracle_config(bound: usize) -> OracleConfig {
    let d = OracleConfig::default();
    OracleConfig {
        bound,
        differential_bound: d.differential_bound.max(bound),
    }
}

/// Optimum over achieved value; 1 when both are zero.
fn ratio(opt: i64, value: i64) -> Option<f64> {
    match (opt, value) {
        (0, _) if value >= 0 => Some(1.0),
        (_, v) if v > 0 => Some(opt as f64 / v as f64),
        _ => None,
    }
}

fn solution_file(problem: Problem, vertices: &VertexSet) -> Value {
    let mut m = Map::new();
    m.insert("problem".into(), json!(problem.name()));
    if let Some(k) = problem.k() {
        m.insert("k".into(), json!(k));
    }
    m.insert("vertices".into(), json!(vertices));
    Value::Object(m)
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Outcome {
    let problem = problem_of(&a.problem)?;
    let g = read_graph(&a.input)?;
    let cfg = oracle_config(a.oracle_bound);
    let start = Instant::now();
    let (solution, trace, fallback) = if a.exact {
        (oracle::exact_optimum(problem, &g, &cfg)?, None, false)
    } else {
        let o = solve::solve(problem, &g, &cfg)?;
        let fb = o.fallback_used();
        (o.solution, Some(o.trace), fb)
    };
    let ms = if a.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let exact_value = if a.exact {
        Some(solution.value)
    } else if a.compare {
        Some(oracle::exact_optimum(problem, &g, &cfg)?.value)
    } else {
        None
    };
    let feasible = problem.value(&g, &solution.vertices) == Some(solution.value);
    if !feasible {
        return Err(
            Error::StructuralViolation("returned solution failed re-verification".into()).into(),
        );
    }
    if let (Some(path), Some(t)) = (&a.trace_out, &trace) {
        write_file(
            path,
            &serde_json::to_string_pretty(&t.to_json()).expect("trace serializes"),
        )?;
    }
    if let Some(path) = &a.solution_out {
        write_file(
            path,
            &solution_file(problem, &solution.vertices).to_string(),
        )?;
    }
    let r = exact_value.and_then(|e| ratio(e, solution.value));
    if a.csv {
        emit(
            out,
            "problem,k,n,m,value,exact_value,ratio,fallback_used,runtime_ms",
        )?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        emit(
            out,
            &format!(
                "{},{},{},{},{},{},{},{},{}",
                problem.name(),
                opt(problem.k().map(|k| k.to_string())),
                g.n(),
                g.m(),
                solution.value,
                opt(exact_value.map(|v| v.to_string())),
                opt(r.map(|r| format!("{r:.6}"))),
                fallback,
                ms
            ),
        )?;
        return Ok(());
    }
    let mut m = Map::new();
    m.insert("problem".into(), json!(problem.name()));
    m.insert("n".into(), json!(g.n()));
    m.insert("m".into(), json!(g.m()));
    if let Some(k) = problem.k() {
        m.insert("k".into(), json!(k));
    }
    m.insert("value".into(), json!(solution.value));
    m.insert("solution".into(), json!(solution.vertices));
    m.insert("feasible".into(), json!(feasible));
    m.insert("factor_bound".into(), json!(problem.factor_bound()));
    if let Some(e) = exact_value {
        m.insert("exact_value".into(), json!(e));
    }
    if let Some(r) = r {
        m.insert("ratio".into(), json!(r));
    }
    m.insert("fallback_used".into(), json!(fallback));
    m.insert("runtime_ms".into(), json!(ms));
    emit(out, &Value::Object(m).to_string())
}

#[derive(Deserialize)]
struct ClaimedSolution {
    problem: String,
    k: Option<usize>,
    #[serde(alias = "solution")]
    vertices: VertexSet,
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let g = read_graph(&a.input)?;
    let text = std::fs::read_to_string(&a.solution).map_err(|e| Failure::io(e, &a.solution))?;
    let claim: ClaimedSolution = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", a.solution.display())))?;
    let problem = match claim.problem.parse::<Problem>().map_err(Failure::usage)? {
        Problem::KNonblocker { .. } => Problem::KNonblocker {
            k: claim
                .k
                .ok_or_else(|| Failure::usage("solution file lacks k"))?,
        },
        p => p,
    };
    let value = problem.value(&g, &claim.vertices);
    let mut m = Map::new();
    m.insert("problem".into(), json!(problem.name()));
    if let Some(k) = problem.k() {
        m.insert("k".into(), json!(k));
    }
    m.insert("feasible".into(), json!(value.is_some()));
    m.insert("value".into(), json!(value));
    emit(out, &Value::Object(m).to_string())?;
    match value {
        Some(_) => Ok(()),
        None => {
            Err(Error::Infeasible(format!("claimed {problem} solution is not feasible")).into())
        }
    }
}

fn cmd_reduce(a: ReduceArgs, out: &mut dyn Write) -> Outcome {
    let problem = problem_of(&a.problem)?;
    let g = read_graph(&a.input)?;
    let (reduced, trace) = solve::reduce(problem, &g)?;
    if let Some(path) = &a.graph_out {
        write_file(path, &serialize_graph(&reduced, format_of(&a.input)))?;
    }
    let obj = json!({
        "problem": problem.name(),
        "n": g.n(),
        "m": g.m(),
        "reduced_n": reduced.n(),
        "reduced_m": reduced.m(),
        "trace": trace.to_json(),
    });
    emit(out, &obj.to_string())
}

fn cmd_audit(a: AuditArgs, out: &mut dyn Write) -> Outcome {
    let problem = problem_of(&a.problem)?;
    let cfg = OracleConfig::default();
    let mut failed = Vec::new();
    for (i, rule) in solve::rules(problem).iter().enumerate() {
        let seed = a.seed.wrapping_add(i as u64);
        let audit = solve::audit_random(
            rule.as_ref(),
            a.samples,
            a.max_n,
            seed,
            a.samples * 500,
            &cfg,
        );
        if !audit.failures.is_empty() {
            failed.push(audit.rule_id);
        }
        emit(
            out,
            &serde_json::to_string(&audit).expect("audit serializes"),
        )?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::AuditFailure {
            rule: failed.join(","),
            detail: "violations listed on stdout".into(),
        }
        .into())
    }
}

fn parse_sizes(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::usage(format!("--sizes expects `a..b` or `n`, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi || lo == 0 {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Instance `index` of order `n`: alternately `G(n, 4/n)` without isolated
/// vertices and a random 3-regular (4-regular for odd `n`) graph.
pub fn bench_instance(n: u32, index: usize, seed: u64) -> (String, Graph) {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64) << 32)
        .wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(mix);
    if index % 2 == 1 && n >= 5 {
        let d = if n.is_multiple_of(2) { 3 } else { 4 };
        if let Some(g) = corpus::random_regular(n, d, &mut rng) {
            return (format!("reg{d}-n{n}-{index}"), g);
        }
    }
    let p = (4.0 / n as f64).min(1.0);
    loop {
        let g = corpus::erdos_renyi(n, p, &mut rng);
        if g.isolates().is_empty() {
            return (format!("er-n{n}-{index}"), g);
        }
    }
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Outcome {
    let problem = problem_of(&a.problem)?;
    let sizes = parse_sizes(&a.sizes)?;
    let cfg = OracleConfig::default();
    let jobs: Vec<(u32, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..a.per_size).map(move |i| (n, i)))
        .collect();
    let rows: Vec<Result<String, Failure>> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let (name, g) = bench_instance(n, i, a.seed);
            let start = Instant::now();
            let value = solve::solve(problem, &g, &cfg)?.solution.value;
            let ms = if a.no_timing {
                0
            } else {
                start.elapsed().as_millis()
            };
            let opt = match oracle::exact_optimum(problem, &g, &cfg) {
                Ok(s) => Some(s.value),
                Err(Error::TooLarge { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let r = opt.and_then(|o| ratio(o, value));
            Ok(format!(
                "{name},{},{},{value},{},{},{ms}",
                g.n(),
                g.m(),
                opt.map(|o| o.to_string()).unwrap_or_default(),
                r.map(|r| format!("{r:.6}")).unwrap_or_default(),
            ))
        })
        .collect();
    emit(out, "instance,n,m,value,opt,ratio,ms")?;
    for row in rows {
        emit(out, &row?)?;
    }
    Ok(())
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let format: Format = a.format.into();
    let ext = match format {
        Format::Dimacs => "dimacs",
        Format::Edgelist => "txt",
    };
    let g = match a.family {
        Family::Er => corpus::erdos_renyi(a.n, a.p, &mut rng),
        Family::Connected => corpus::random_connected(a.n, a.p, &mut rng),
        Family::Regular => corpus::random_regular(a.n, a.d, &mut rng).ok_or_else(|| {
            Failure::usage(format!("no {}-regular graph of order {} found", a.d, a.n))
        })?,
        Family::ConditionStar => {
            if a.n < 4 {
                return Err(Failure::usage("condition-star needs --n >= 4"));
            }
            corpus::random_condition_star(a.n, &mut rng)
        }
        Family::All => {
            if !(1..=corpus::MAX_EXHAUSTIVE as u32).contains(&a.n) {
                return Err(Failure::usage(format!(
                    "--n must be in 1..={}",
                    corpus::MAX_EXHAUSTIVE
                )));
            }
            let dir = a
                .out_dir
                .ok_or_else(|| Failure::usage("--family all needs --out-dir"))?;
            std::fs::create_dir_all(&dir).map_err(|e| Failure::io(e, &dir))?;
            let graphs = corpus::connected_graphs(a.n as usize);
            for (i, g) in graphs.iter().enumerate() {
                write_file(
                    &dir.join(format!("n{}-{i:06}.{ext}", a.n)),
                    &serialize_graph(g, format),
                )?;
            }
            return emit(out, &json!({ "n": a.n, "count": graphs.len() }).to_string());
        }
    };
    write!(out, "{}", serialize_graph(&g, format)).map_err(|e| Failure {
        code: 5,
        kind: "io",
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("domred").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn sizes_parse() {
        assert_eq!(parse_sizes("8..10").unwrap(), vec![8, 9, 10]);
        assert_eq!(parse_sizes("5").unwrap(), vec![5]);
        assert!(parse_sizes("9..3").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(
            run_str(&[
                "solve",
                "--problem",
                "knonblocker",
                "--input",
                "/nonexistent"
            ])
            .0,
            1
        );
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("solve"));
    }

    #[test]
    fn bench_is_reproducible() {
        let args = [
            "bench",
            "--problem",
            "nonblocker",
            "--sizes",
            "6..7",
            "--per-size",
            "3",
            "--seed",
            "7",
            "--no-timing",
        ];
        let (code, a, _) = run_str(&args);
        assert_eq!(code, 0);
        assert_eq!(a, run_str(&args).1);
        assert_eq!(a.lines().next(), Some("instance,n,m,value,opt,ratio,ms"));
        assert_eq!(a.lines().count(), 7);
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(ratio(0, 0), Some(1.0));
        assert_eq!(ratio(4, 2), Some(2.0));
        assert_eq!(ratio(3, 0), None);
    }
}
