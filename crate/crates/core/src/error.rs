use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pair ({0}, {1}) is unreachable")]
    UnreachablePair(NodeId, NodeId),

    #[error("witness path for pair ({0}, {1}) is not a shortest path")]
    NonShortestWitness(NodeId, NodeId),

    #[error("edge {0} has positive weight but lies on no witness path")]
    UncoveredEdge(usize),

    #[error("path enumeration exceeded the cap of {0}")]
    PathExplosion(u64),

    #[error("local graph still has a positive-weight cycle after zero-weight contraction")]
    CyclicAfterContraction,

    #[error("instance is already directed")]
    AlreadyDirected,

    #[error("input solution is infeasible: {0}")]
    InfeasibleInput(String),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program solver failed: {0}")]
    LpNumericalFailure(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("fractional solution does not conserve flow for pair {pair} (residual {residual:e})")]
    NonConservingInput { pair: usize, residual: f64 },

    #[error("invalid MAX-REP partition: {0}")]
    InvalidPartition(String),

    #[error("witness path for pair {0} does not follow the gadget structure")]
    StructureViolation(usize),

    #[error("enumeration of {0} combinations exceeds the cap")]
    Explosion(u64),

    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
