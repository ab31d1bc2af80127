use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("branching fractions sum to {0}, expected 1")]
    BranchingSum(f64),
    #[error("initial distribution is not a probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("amplitude norm {norm} exceeds 1 at sample {index}")]
    NonNormalized { index: usize, norm: f64 },
    #[error("trajectory samples must be uniformly spaced: {0}")]
    NonUniformGrid(String),
    #[error("probability {name} = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("6-j arguments violate the triangle rule: {0}")]
    Triangle(String),
    #[error("trace drifted by {0:e} during evolution")]
    TraceDrift(f64),
    #[error("integration step {0:e} underflows the segment duration")]
    StepUnderflow(f64),
    #[error("pulse calibration stalled at infidelity {residual:e}")]
    Calibration { residual: f64 },
    #[error("data file: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
