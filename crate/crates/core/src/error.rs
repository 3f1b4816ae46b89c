use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("term set half-width must be at least 1")]
    ZeroHalfWidth,

    #[error("scale base must be finite and greater than 1, got {0}")]
    InvalidBase(f64),

    #[error("term scale is not strictly increasing for phi = {phi}, base = {base}")]
    DegenerateScale { phi: usize, base: f64 },

    #[error("term index {index} outside 0..={max}")]
    TermIndexOutOfRange { index: usize, max: usize },

    #[error("opinion value {0} outside [0, 1]")]
    OpinionOutOfRange(f64),

    #[error("need at least {required} agents, got {actual}")]
    TooFewAgents { required: usize, actual: usize },

    #[error("vertex {vertex} outside a network of {size} agents")]
    VertexOutOfRange { vertex: usize, size: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{name} must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("thresholds violate 0 <= alpha <= beta <= 1 (alpha = {alpha}, beta = {beta})")]
    ThresholdOrder { alpha: f64, beta: f64 },

    #[error("decay factor must be finite and non-negative, got {0}")]
    InvalidDecay(f64),

    #[error("distance must be finite and non-negative, got {0}")]
    InvalidDistance(f64),

    #[error("loss {name} must be finite and non-negative, got {value}")]
    InvalidLoss { name: &'static str, value: f64 },

    #[error("opinion sequence is empty")]
    EmptyOpinions,

    #[error("maximum deviation must be positive, got {0}")]
    InvalidMaxDeviation(f64),

    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),

    #[error("weight ({row}, {col}) = {value} outside [0, 1]")]
    WeightOutOfRange { row: usize, col: usize, value: f64 },

    #[error("weight row {row} sums to {sum}, not 1")]
    NotRowStochastic { row: usize, sum: f64 },

    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}
