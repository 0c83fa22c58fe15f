use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown name `{name}`; known names: {known}")]
    Lookup { name: String, known: String },

    #[error("capability missing: {0}")]
    Capability(&'static str),

    #[error("point outside the support: {0}")]
    Domain(String),

    #[error("envelope violated at {point:?}: p(y) > M g(y)")]
    EnvelopeViolation { point: Vec<f64> },

    #[error("degenerate sample: all weights are zero")]
    DegenerateSample,

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("initial state outside the support: {0:?}")]
    Initialization(Vec<f64>),

    #[error("simulation budget exhausted after {simulated} draws ({accepted} accepted)")]
    BudgetExhausted { simulated: usize, accepted: usize },

    #[error("estimate undefined: {0}")]
    UndefinedEstimate(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
