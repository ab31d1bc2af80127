use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

impl From<erasure_qec::Error> for CliError {
    fn from(e: erasure_qec::Error) -> Self {
        use erasure_qec::Error::*;
        match e {
            InvalidDistance(_) | InvalidRounds | InvalidNoise(_) | BiasedWithErasure(_) | InvalidRequest(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<rydberg_gate::Error> for CliError {
    fn from(e: rydberg_gate::Error) -> Self {
        use rydberg_gate::Error::*;
        match e {
            InvalidConfig(_) | BranchingSum(_) | InvalidDistribution(_) | ProbabilityOutOfRange { .. } | Triangle(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io { context: "writing CSV".into(), source: e.into() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
