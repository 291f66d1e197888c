use thiserror::Error;

use crate::network::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge list is empty")]
    EmptyInput,
    #[error("graph is not connected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("edge ({u}, {v}) has non-positive conductance {c}")]
    NonpositiveConductance { u: usize, v: usize, c: f64 },
    #[error("vertex {0} is out of range")]
    InvalidVertex(usize),
    #[error("contraction set is empty")]
    EmptyContractionSet,
    #[error("vertices outside the contraction set are empty or disconnected")]
    ComplementDisconnected,
    #[error("invalid exhaustion radius {0}")]
    InvalidRadius(usize),

    #[error("no clamped vertices in boundary specification")]
    EmptyBoundary,
    #[error("solver did not converge after {iterations} iterations (defect {defect:e})")]
    SolverDivergence { iterations: usize, defect: f64 },
    #[error("target set is empty")]
    EmptyTarget,
    #[error("source vertex {0} belongs to the target set")]
    VertexInTarget(VertexId),
    #[error("network does not look transient: {0}")]
    NotTransient(String),
    #[error("limit did not converge within {levels} levels (best estimate {best})")]
    BudgetExceededWithoutConvergence { best: f64, levels: usize },

    #[error("source and sink sets overlap at vertex {0}")]
    OverlappingSets(VertexId),
    #[error("edge function is not a flow from A to Z: {0}")]
    NotAFlow(String),

    #[error("invalid tree specification: {0}")]
    InvalidSpec(String),
    #[error("homogeneous trees need q >= 2, got {0}")]
    InvalidQ(usize),
    #[error("invalid escape case: {0}")]
    InvalidCase(String),
    #[error("resistance between a vertex and itself")]
    SameVertex,

    #[error("walk start {0} is not a vertex of the network")]
    InvalidStart(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed network file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
