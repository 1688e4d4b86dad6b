use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounded::BoundCertificate;
use crate::corpus;
use crate::engine::{audit_rule, run_to_fixpoint, Measure, Reduction, ReductionTrace, Rule};
use crate::error::Result;
use crate::graph::Graph;
use crate::oracle::OracleConfig;
use crate::problem::{Problem, Solution};
use crate::{differential, harmless, knonblocker, nonblocker};

/// Result of one approximation pipeline run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub solution: Solution,
    pub trace: ReductionTrace,
    /// Bound achieved on each component of the reduced graph.
    pub certificate: BoundCertificate,
    /// Certificate of the inner solver on the auxiliary (doubled, nucleus,
    /// gadget) instance, when one was built.
    pub inner: Option<BoundCertificate>,
}

impl Outcome {
    /// Whether anything other than the plain heuristic produced the result.
    pub fn fallback_used(&self) -> bool {
        self.certificate.fallback_used || self.inner.as_ref().is_some_and(|c| c.fallback_used)
    }
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    reduced_n: usize,
    steps: usize,
    certificate: &'a BoundCertificate,
    inner: &'a Option<BoundCertificate>,
}

impl Outcome {
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(OutcomeJson {
            reduced_n: self.trace.final_graph().n(),
            steps: self.trace.len(),
            certificate: &self.certificate,
            inner: &self.inner,
        })
        .expect("outcome serializes")
    }
}

/// Runs the approximation pipeline for `problem`.
pub fn solve(problem: Problem, g: &Graph, cfg: &OracleConfig) -> Result<Outcome> {
    match problem {
        Problem::Nonblocker => nonblocker::solve_nonblocker(g, cfg),
        Problem::Harmless => harmless::solve_harmless(g, cfg),
        Problem::Differential => differential::solve_differential(g, cfg),
        Problem::KNonblocker { k } => knonblocker::solve_k_nonblocker(g, k, cfg),
    }
}

/// Runs only the reduction phase of the pipeline for `problem`.
pub fn reduce(problem: Problem, g: &Graph) -> Result<(Graph, ReductionTrace)> {
    match problem {
        Problem::Nonblocker => run_to_fixpoint(g, &nonblocker::rules(), problem, Measure::Size),
        Problem::Harmless => run_to_fixpoint(g, &harmless::rules(), problem, Measure::Size),
        Problem::Differential => {
            run_to_fixpoint(g, &differential::rules(), problem, Measure::SizeAndLeaves)
        }
        Problem::KNonblocker { k } => knonblocker::reduce(g, k),
    }
}

/// Every reduction rule of `problem`, in pipeline priority order.
pub fn rules(problem: Problem) -> Vec<Box<dyn Rule>> {
    fn boxed<const N: usize>(rules: [&'static dyn Rule; N]) -> Vec<Box<dyn Rule>> {
        rules
            .into_iter()
            .map(|r| Box::new(StaticRule(r)) as Box<dyn Rule>)
            .collect()
    }
    match problem {
        Problem::Nonblocker => boxed(nonblocker::rules()),
        Problem::Harmless => boxed(harmless::rules()),
        Problem::Differential => boxed(differential::rules()),
        Problem::KNonblocker { k } => {
            let (d, m) = knonblocker::rules(k);
            vec![Box::new(d), Box::new(m)]
        }
    }
}

struct StaticRule(&'static dyn Rule);

impl Rule for StaticRule {
    fn id(&self) -> &'static str {
        self.0.id()
    }
    fn problem(&self) -> Problem {
        self.0.problem()
    }
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>> {
        self.0.reduce(g)
    }
}

/// Outcome of auditing one rule on a seeded random corpus.
#[derive(Clone, Debug, Serialize)]
pub struct RuleAudit {
    pub rule_id: &'static str,
    pub problem: String,
    pub applied: usize,
    pub attempts: usize,
    pub failures: Vec<String>,
}

impl RuleAudit {
    pub fn passed(&self, target: usize) -> bool {
        self.failures.is_empty() && self.applied >= target
    }
}

/// Draws random graphs of order `2..=max_n` until `rule` applied to
/// `target` of them (or `max_attempts` were drawn) and audits each.
pub fn audit_random(
    rule: &dyn Rule,
    target: usize,
    max_n: u32,
    seed: u64,
    max_attempts: usize,
    cfg: &OracleConfig,
) -> RuleAudit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut audit = RuleAudit {
        rule_id: rule.id(),
        problem: rule.problem().to_string(),
        applied: 0,
        attempts: 0,
        failures: Vec::new(),
    };
    let needs_no_isolates = rule.problem() == Problem::Harmless;
    while audit.applied < target && audit.attempts < max_attempts {
        audit.attempts += 1;
        let n = rng.gen_range(2..=max_n);
        let g = corpus::random_small(n, &mut rng);
        if needs_no_isolates && !g.isolates().is_empty() {
            continue;
        }
        match audit_rule(rule, &g, cfg, 3, &mut rng) {
            Ok(r) if r.applied => audit.applied += 1,
            Ok(_) => {}
            Err(e) => {
                audit.applied += 1;
                audit.failures.push(format!(
                    "{e} on {}",
                    crate::io::serialize_graph(&g, crate::io::Format::Edgelist).replace('\n', " ")
                ));
            }
        }
    }
    audit
}
