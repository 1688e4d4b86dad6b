//! The four maximization problems and their solution values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle;

/// A maximization problem over vertex sets of a graph.
///
/// For the three complement problems the solution set `S` is the
/// complement of a (total, `k`-) dominating set. For Differential it is the
/// set whose differential `|N(S) \ S| - |S|` is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum Problem {
    Nonblocker,
    Harmless,
    Differential,
    #[serde(rename = "knonblocker")]
    KNonblocker {
        k: usize,
    },
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Nonblocker => "nonblocker",
            Problem::Harmless => "harmless",
            Problem::Differential => "differential",
            Problem::KNonblocker { .. } => "knonblocker",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match *self {
            Problem::KNonblocker { k } => Some(k),
            _ => None,
        }
    }

    /// Objective value of `set`, or `None` if it is not a feasible solution.
    pub fn value(&self, g: &Graph, set: &VertexSet) -> Option<i64> {
        if !set.iter().all(|&v| g.contains(v)) {
            return None;
        }
        let rest = || {
            g.vertices()
                .filter(|v| !set.contains(v))
                .collect::<VertexSet>()
        };
        let feasible = match *self {
            Problem::Nonblocker => oracle::verify_dominating(g, &rest()),
            Problem::Harmless => oracle::verify_total_dominating(g, &rest()),
            Problem::Differential => return Some(oracle::differential_value(g, set)),
            Problem::KNonblocker { k } => oracle::verify_k_dominating(g, &rest(), k),
        };
        feasible.then_some(set.len() as i64)
    }

    /// Human-readable approximation guarantee of the pipeline.
    pub fn factor_bound(&self) -> String {
        match *self {
            Problem::Nonblocker => "5/3".into(),
            Problem::Harmless => "2".into(),
            Problem::Differential => "11/3".into(),
            Problem::KNonblocker { k } => format!("{} (additive {})", k + 1, k),
        }
    }

    /// Whether `value` meets the guarantee against the optimum `opt`.
    pub fn meets_guarantee(&self, value: i64, opt: i64) -> bool {
        match *self {
            Problem::Nonblocker => 5 * value >= 3 * opt,
            Problem::Harmless => 2 * value >= opt,
            Problem::Differential => 11 * value >= 3 * opt,
            Problem::KNonblocker { k } => (k as i64 + 1) * (value + k as i64) >= opt,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}(k={k})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Parses a problem name; `knonblocker` needs `k` from elsewhere and is
/// returned with `k = 0` as a placeholder.
impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nonblocker" => Ok(Problem::Nonblocker),
            "harmless" => Ok(Problem::Harmless),
            "differential" => Ok(Problem::Differential),
            "knonblocker" | "k-nonblocker" => Ok(Problem::KNonblocker { k: 0 }),
            other => Err(format!("unknown problem `{other}`")),
        }
    }
}

/// A feasible solution together with its objective value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    #[serde(flatten)]
    pub problem: Problem,
    pub vertices: VertexSet,
    pub value: i64,
}

impl Solution {
    /// Validates feasibility and computes the value.
    pub fn new(problem: Problem, g: &Graph, vertices: VertexSet) -> Result<Self> {
        match problem.value(g, &vertices) {
            Some(value) => Ok(Solution {
                problem,
                vertices,
                value,
            }),
            None => Err(Error::Infeasible(format!(
                "{vertices:?} is not a feasible {problem} solution"
            ))),
        }
    }

    /// Complement of the solution inside `g`: the dominating side.
    pub fn complement(&self, g: &Graph) -> VertexSet {
        g.vertices()
            .filter(|v| !self.vertices.contains(v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_feasibility() {
        let c5 = Graph::cycle(5);
        let s: VertexSet = [4, 5].into_iter().collect();
        assert_eq!(Problem::Nonblocker.value(&c5, &s), Some(2));
        // D = {1,2,3}: 1 has neighbor 2 in D, 4 has 3, 5 has 1
        assert_eq!(Problem::Harmless.value(&c5, &s), Some(2));
        let s: VertexSet = [2, 4].into_iter().collect();
        assert_eq!(Problem::Nonblocker.value(&c5, &s), Some(2));
        assert_eq!(Problem::Harmless.value(&c5, &s), None);
        assert_eq!(Problem::Differential.value(&c5, &VertexSet::new()), Some(0));
        assert_eq!(
            Problem::Nonblocker.value(&c5, &[9].into_iter().collect()),
            None
        );
    }

    #[test]
    fn guarantees() {
        assert!(Problem::Nonblocker.meets_guarantee(3, 5));
        assert!(!Problem::Nonblocker.meets_guarantee(2, 5));
        assert!(Problem::Harmless.meets_guarantee(1, 2));
        assert!(Problem::Differential.meets_guarantee(1, 3));
        assert!(!Problem::Differential.meets_guarantee(0, 1));
        assert!(Problem::KNonblocker { k: 2 }.meets_guarantee(0, 6));
        assert!(!Problem::KNonblocker { k: 2 }.meets_guarantee(0, 7));
    }

    #[test]
    fn solution_serializes_flat() {
        let sol = Solution::new(
            Problem::KNonblocker { k: 2 },
            &Graph::complete(4),
            [3, 4].into_iter().collect(),
        )
        .unwrap();
        let json = serde_json::to_value(&sol).unwrap();
        assert_eq!(json["problem"], "knonblocker");
        assert_eq!(json["k"], 2);
        assert_eq!(json["value"], 2);
    }
}
