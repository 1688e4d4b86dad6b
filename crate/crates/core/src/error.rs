use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge {
        line: usize,
        u: VertexId,
        v: VertexId,
    },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("instance has no feasible solution: {0}")]
    InfeasibleInstance(String),
    #[error("lift through `{rule}` failed: {reason}")]
    InfeasibleLift { rule: String, reason: String },
    #[error("graph of order {n} exceeds the exact-solver bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("no feasible solution exists: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bound not certified on a component of order {n}: achieved {achieved}, bound {bound}")]
    BoundNotCertified { n: usize, achieved: i64, bound: i64 },
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("audit of `{rule}` failed: {detail}")]
    AuditFailure { rule: String, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
