use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvacError {
    #[error("invalid polygon: n = {0} (need n >= 3)")]
    InvalidPolygon(usize),
    #[error("vertex index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("weighted objective requires k = 1 (got k = {0})")]
    UnsupportedWeightedK(usize),
    #[error("weight w = {0} outside [0, 1]")]
    InvalidWeight(f64),
    #[error("LP solve failed: {0}")]
    NumericFailure(String),
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("checkpoint parse error: {0}")]
    CheckpointParse(String),
    #[error("configuration count {count} exceeds budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("infeasible trajectory at stage {stage}: {reason}")]
    InfeasibleTrajectory { stage: usize, reason: String },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("parameter {index} left its box: {value}")]
    ParameterOutOfBox { index: usize, value: f64 },
    #[error("no known configuration for n = {n}, k = {k}, w = {w}")]
    NoKnownConfiguration { n: usize, k: usize, w: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, EvacError>;
