//! Reduction rules, the fixpoint driver and solution lifting.
//!
//! A rule maps an instance `G` to a smaller instance `G'` together with a
//! way to turn solutions of `G'` back into solutions of `G`. With constants
//! `(a, b)` the rule promises `opt(G') + a >= opt(G)` and that lifting adds
//! at least `b` to the value of any feasible solution, exactly `b` for an
//! optimal one. For `a <= alpha * b` an alpha-approximation of `G'` then
//! lifts to an alpha-approximation of `G`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::oracle::{self, OracleConfig};
use crate::problem::Problem;

/// Maps a solution of the reduced graph to one of the graph before the step.
pub type LiftFn = Arc<dyn Fn(&Graph, &Graph, &VertexSet) -> Result<VertexSet> + Send + Sync>;

/// One application of a rule, as produced by [`Rule::reduce`].
pub struct Reduction {
    pub graph: Graph,
    pub a: i64,
    pub b: i64,
    /// Fresh vertex id -> the vertices it replaced.
    pub merges: BTreeMap<VertexId, VertexSet>,
    pub tag: &'static str,
    pub payload: Value,
    pub lift: LiftFn,
}

impl Reduction {
    pub fn new(
        graph: Graph,
        (a, b): (i64, i64),
        tag: &'static str,
        payload: Value,
        lift: impl Fn(&Graph, &Graph, &VertexSet) -> Result<VertexSet> + Send + Sync + 'static,
    ) -> Self {
        Reduction {
            graph,
            a,
            b,
            merges: BTreeMap::new(),
            tag,
            payload,
            lift: Arc::new(lift),
        }
    }

    pub fn with_merge(mut self, fresh: VertexId, originals: VertexSet) -> Self {
        self.merges.insert(fresh, originals);
        self
    }
}

pub trait Rule: Send + Sync {
    fn id(&self) -> &'static str;

    fn problem(&self) -> Problem;

    /// Applies the rule at its lexicographically smallest site, or returns
    /// `None` when it does not apply.
    fn reduce(&self, g: &Graph) -> Result<Option<Reduction>>;
}

#[derive(Clone)]
pub struct StepRecord {
    pub rule_id: &'static str,
    pub before: Arc<Graph>,
    pub after: Arc<Graph>,
    pub removed_vertices: VertexSet,
    pub added_vertices: VertexSet,
    pub removed_edges: Vec<(VertexId, VertexId)>,
    pub added_edges: Vec<(VertexId, VertexId)>,
    pub merges: BTreeMap<VertexId, VertexSet>,
    pub tag: &'static str,
    pub payload: Value,
    pub a: i64,
    pub b: i64,
    lift: LiftFn,
}

impl fmt::Debug for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StepRecord")
            .field("rule_id", &self.rule_id)
            .field("removed_vertices", &self.removed_vertices)
            .field("added_vertices", &self.added_vertices)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish_non_exhaustive()
    }
}

impl StepRecord {
    pub fn new(rule_id: &'static str, before: Arc<Graph>, r: Reduction) -> Self {
        let after = Arc::new(r.graph);
        let bv = before.vertex_set();
        let av = after.vertex_set();
        let be: BTreeSet<_> = before.edges().collect();
        let ae: BTreeSet<_> = after.edges().collect();
        StepRecord {
            rule_id,
            removed_vertices: bv.difference(&av).copied().collect(),
            added_vertices: av.difference(&bv).copied().collect(),
            removed_edges: be.difference(&ae).copied().collect(),
            added_edges: ae.difference(&be).copied().collect(),
            before,
            after,
            merges: r.merges,
            tag: r.tag,
            payload: r.payload,
            a: r.a,
            b: r.b,
            lift: r.lift,
        }
    }

    /// Lifts `sol` (feasible on `after`) to `before`, checking feasibility
    /// and the gain of at least `b`.
    pub fn lift(&self, problem: Problem, sol: &VertexSet) -> Result<VertexSet> {
        let fail = |reason: String| Error::InfeasibleLift {
            rule: self.rule_id.to_string(),
            reason,
        };
        let input = problem.value(&self.after, sol).ok_or_else(|| {
            fail(format!(
                "input {sol:?} is not feasible on the reduced graph"
            ))
        })?;
        let out = (self.lift)(&self.before, &self.after, sol)?;
        match problem.value(&self.before, &out) {
            None => Err(fail(format!("lifted set {out:?} is not feasible"))),
            Some(v) if v < input + self.b => Err(fail(format!(
                "lifted value {v} below input {input} + b {}",
                self.b
            ))),
            Some(_) => Ok(out),
        }
    }

    fn to_json(&self, cum_a: i64, cum_b: i64) -> Value {
        json!({
            "rule_id": self.rule_id,
            "removed_vertices": self.removed_vertices,
            "added_vertices": self.added_vertices,
            "removed_edges": self.removed_edges,
            "added_edges": self.added_edges,
            "merges": self.merges,
            "lift": self.tag,
            "payload": self.payload,
            "a": self.a,
            "b": self.b,
            "A": cum_a,
            "B": cum_b,
        })
    }
}

/// Ordered log of applied steps; step `i + 1` starts from the graph step `i`
/// produced.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub problem: Problem,
    pub original: Arc<Graph>,
    pub steps: Vec<StepRecord>,
}

impl ReductionTrace {
    pub fn new(problem: Problem, original: Graph) -> Self {
        ReductionTrace {
            problem,
            original: Arc::new(original),
            steps: Vec::new(),
        }
    }

    pub fn final_graph(&self) -> &Graph {
        self.steps.last().map_or(&self.original, |s| &s.after)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: StepRecord) {
        debug_assert!(*step.before == *self.final_graph());
        self.steps.push(step);
    }

    pub fn total_a(&self) -> i64 {
        self.steps.iter().map(|s| s.a).sum()
    }

    pub fn total_b(&self) -> i64 {
        self.steps.iter().map(|s| s.b).sum()
    }

    /// `A <= alpha * B` where `alpha = num / den`; vacuous for negative `B`.
    pub fn constants_preserve(&self, num: i64, den: i64) -> bool {
        let (a, b) = (self.total_a(), self.total_b());
        b < 0 || den * a <= num * b
    }

    /// Lifts a solution of the final graph back to the original graph.
    pub fn lift(&self, sol: &VertexSet) -> Result<VertexSet> {
        let mut cur = sol.clone();
        for step in self.steps.iter().rev() {
            cur = step.lift(self.problem, &cur)?;
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> Value {
        let (mut a, mut b) = (0, 0);
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                a += s.a;
                b += s.b;
                s.to_json(a, b)
            })
            .collect();
        json!({
            "problem": self.problem.name(),
            "k": self.problem.k(),
            "n": self.original.n(),
            "m": self.original.m(),
            "final_n": self.final_graph().n(),
            "final_m": self.final_graph().m(),
            "steps": steps,
            "A": a,
            "B": b,
        })
    }
}

/// Quantity every step must strictly decrease.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `n + m`.
    Size,
    /// `n + m + #leaves`, for rule sets that may add edges.
    SizeAndLeaves,
}

impl Measure {
    pub fn of(self, g: &Graph) -> usize {
        match self {
            Measure::Size => g.n() + g.m(),
            Measure::SizeAndLeaves => g.n() + g.m() + g.leaves().len(),
        }
    }
}

/// Applies the first applicable rule (in list order) until none applies.
pub fn run_to_fixpoint(
    g: &Graph,
    rules: &[&dyn Rule],
    problem: Problem,
    measure: Measure,
) -> Result<(Graph, ReductionTrace)> {
    let mut trace = ReductionTrace::new(problem, g.clone());
    extend_to_fixpoint(&mut trace, rules, measure)?;
    Ok((trace.final_graph().clone(), trace))
}

/// Continues an existing trace until no rule applies.
pub fn extend_to_fixpoint(
    trace: &mut ReductionTrace,
    rules: &[&dyn Rule],
    measure: Measure,
) -> Result<()> {
    let mut cur = Arc::new(trace.final_graph().clone());
    'outer: loop {
        for rule in rules {
            debug_assert_eq!(rule.problem(), trace.problem);
            let Some(r) = rule.reduce(&cur)? else {
                continue;
            };
            let before = measure.of(&cur);
            if measure.of(&r.graph) >= before {
                return Err(Error::StructuralViolation(format!(
                    "rule `{}` did not shrink the instance",
                    rule.id()
                )));
            }
            let step = StepRecord::new(rule.id(), cur, r);
            cur = step.after.clone();
            trace.push(step);
            continue 'outer;
        }
        return Ok(());
    }
}

/// Outcome of checking one rule application against exact optima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub rule_id: String,
    pub applied: bool,
    pub opt_before: i64,
    pub opt_after: i64,
    pub a: i64,
    pub b: i64,
    pub samples: usize,
}

/// Checks `opt(G') + a >= opt(G)`, that the lifted optimum of `G'` gains
/// exactly `b`, and that lifted random maximal solutions gain at least `b`.
pub fn audit_rule(
    rule: &dyn Rule,
    g: &Graph,
    cfg: &OracleConfig,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<AuditReport> {
    let problem = rule.problem();
    let fail = |detail: String| Error::AuditFailure {
        rule: rule.id().to_string(),
        detail,
    };
    let mut report = AuditReport {
        rule_id: rule.id().to_string(),
        applied: false,
        opt_before: 0,
        opt_after: 0,
        a: 0,
        b: 0,
        samples: 0,
    };
    let Some(r) = rule.reduce(g)? else {
        return Ok(report);
    };
    let step = StepRecord::new(rule.id(), Arc::new(g.clone()), r);
    report.applied = true;
    report.a = step.a;
    report.b = step.b;
    let opt = oracle::exact_optimum(problem, g, cfg)?.value;
    let reduced = oracle::exact_optimum(problem, &step.after, cfg)?;
    report.opt_before = opt;
    report.opt_after = reduced.value;
    if reduced.value + step.a < opt {
        return Err(fail(format!(
            "opt(G') + a = {} + {} < opt(G) = {opt}",
            reduced.value, step.a
        )));
    }
    let lifted = step
        .lift(problem, &reduced.vertices)
        .map_err(|e| fail(e.to_string()))?;
    let v = problem.value(g, &lifted).unwrap();
    if v != reduced.value + step.b {
        return Err(fail(format!(
            "lifted optimum has value {v}, expected {} + {}",
            reduced.value, step.b
        )));
    }
    for _ in 0..samples {
        let s = random_solution(problem, &step.after, rng);
        step.lift(problem, &s).map_err(|e| fail(e.to_string()))?;
        report.samples += 1;
    }
    Ok(report)
}

/// A random feasible solution: for the complement problems a maximal one
/// grown in random order, for Differential a random subset.
pub fn random_solution(problem: Problem, g: &Graph, rng: &mut impl Rng) -> VertexSet {
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.shuffle(rng);
    if problem == Problem::Differential {
        return order.into_iter().filter(|_| rng.gen_bool(0.3)).collect();
    }
    let mut s = VertexSet::new();
    for v in order {
        s.insert(v);
        if problem.value(g, &s).is_none() {
            s.remove(&v);
        }
    }
    s
}
