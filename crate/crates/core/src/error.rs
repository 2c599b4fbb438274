use thiserror::Error;

/// Errors raised by graph validation, the oracles, the approximation schemes
/// and the instance generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph contains a directed cycle")]
    CyclicGraph,
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("source and sink are the same vertex ({0})")]
    SourceEqualsSink(usize),
    #[error("vertex id {vertex} is out of range for a graph with {n} vertices")]
    DanglingVertexId { vertex: usize, n: usize },
    #[error("edge {edge} has a negative weight")]
    NegativeWeight { edge: usize },
    #[error("second weight is present on some edges but missing on edge {edge}")]
    PartialSecondWeights { edge: usize },
    #[error("invalid decimal literal {0:?}")]
    InvalidDecimal(String),
    #[error("value {0} has no finite decimal representation")]
    NonTerminatingDecimal(String),
    #[error("path enumeration cap exceeded: {count} paths, cap {cap}")]
    CapExceeded { count: String, cap: u64 },
    #[error("operation requires integer first-instance weights")]
    NonIntegerWeights,
    #[error("operation requires a second weight on every edge")]
    InstanceTwoAbsent,
    #[error("instance too large for the reference evaluator: {0}")]
    InstanceTooLarge(String),
    #[error("first-instance budget must be positive")]
    NonPositiveL1,
    #[error("parameter {name} must be positive")]
    NonPositiveParameter { name: &'static str },
    #[error("parameter {name} is out of range: {reason}")]
    ParameterOutOfRange { name: &'static str, reason: String },
    #[error("no s-t path exists")]
    NoPath,
    #[error("generator input is empty")]
    EmptyInput,
    #[error("input lists have different lengths ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("instance cannot be shifted to nonnegative weights: {0}")]
    UnrescalableInstance(String),
    #[error("generated instance has no s-t path")]
    DegenerateInstance,
    #[error("polynomial factor {factor} has a negative coefficient")]
    NegativeCoefficient { factor: usize },
    #[error("polynomial factor {factor} has no terms with positive coefficient")]
    EmptyFactor { factor: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

impl Error {
    /// Capability errors: the input is well-formed, but the requested
    /// algorithm cannot run on it.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::NonIntegerWeights
                | Error::InstanceTwoAbsent
                | Error::InstanceTooLarge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
