//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(usize, usize, f64),

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge endpoint {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("graph is not connected")]
    DisconnectedGraph,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("partition range requires 1 <= k <= j, got j = {j}, k = {k}")]
    InvalidRange { j: usize, k: usize },

    #[error("input is not in the cutset space (projection residual {residual:.3e})")]
    NotInCutsetSpace { residual: f64 },

    #[error("series order {order} exceeds the guard limit {max}")]
    OverflowGuard { order: usize, max: usize },

    #[error("argument {value} is outside the domain [{min}, inf)")]
    DomainError { value: f64, min: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iterate left the angle domain (cap {gamma_cap} rad)")]
    LeftDomain { gamma_cap: f64 },

    #[error("operator is rank-deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("case reduces to a disconnected network")]
    DisconnectedCase,

    #[error("branch ({from}, {to}) has non-positive reactance {x}")]
    NonPositiveReactance { from: usize, to: usize, x: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
