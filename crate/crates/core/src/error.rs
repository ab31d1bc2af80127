use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("code distance must be odd and at least 3, got {0}")]
    InvalidDistance(usize),
    #[error("number of syndrome rounds must be at least 1")]
    InvalidRounds,
    #[error("invalid noise parameter: {0}")]
    InvalidNoise(String),
    #[error("biased noise does not support erasures (erasure fraction {0})")]
    BiasedWithErasure(f64),
    #[error("decoding graph weights are undefined for a zero error rate")]
    ZeroErrorRate,
    #[error("error mechanism flips {0} detectors of one check class; only graph-like errors are supported")]
    Hyperedge(usize),
    #[error("a fault flips logical class {0} without firing any detector")]
    UndetectableLogical(u8),
    #[error("unknown gate location (round {round}, gate {gate})")]
    UnknownLocation { round: u32, gate: u32 },
    #[error("defect on unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("cluster forest is not finished: an odd cluster without boundary remains")]
    UnfinishedForest,
    #[error("no threshold crossing inside the scanned window: {0}")]
    NoCrossing(String),
    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),
    #[error("invalid experiment request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
