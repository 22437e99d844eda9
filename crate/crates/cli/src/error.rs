use distal_core::confrac::ConfracError;
use distal_core::correlation::CorrelationError;
use distal_core::flows::FlowsError;
use distal_core::sieve::SieveError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad config: {0}")]
    Config(String),
    #[error("precision insufficient: {0}")]
    Precision(String),
    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error("checksum mismatch: {0}")]
    Checksum(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precision(_) => 2,
            CliError::CacheCorrupt(_) | CliError::Checksum(_) => 3,
            CliError::Config(_) => 4,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

fn confrac_is_precision(e: &ConfracError) -> bool {
    matches!(
        e,
        ConfracError::PrecisionInsufficient { .. }
            | ConfracError::InsufficientTail { .. }
            | ConfracError::PrecisionExhausted { .. }
    )
}

impl From<ConfracError> for CliError {
    fn from(e: ConfracError) -> Self {
        match e {
            ConfracError::InvalidInput(_) | ConfracError::InvalidQuotients(_) | ConfracError::Parse(_) => {
                CliError::Config(e.to_string())
            }
            _ if confrac_is_precision(&e) => CliError::Precision(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<FlowsError> for CliError {
    fn from(e: FlowsError) -> Self {
        match e {
            FlowsError::Confrac(c) => c.into(),
            FlowsError::InsufficientQuotients { .. } | FlowsError::TruncationOutOfRange { .. } => {
                CliError::Precision(e.to_string())
            }
            FlowsError::InvalidInput(_) | FlowsError::InvalidMap(_) => CliError::Config(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::CacheCorrupt(m) => CliError::CacheCorrupt(m),
            SieveError::InvalidArgument(_) | SieveError::OutOfRange { .. } | SieveError::ResourceExhausted { .. } => {
                CliError::Config(e.to_string())
            }
            SieveError::Io(io) => CliError::Io(io),
        }
    }
}

impl From<CorrelationError> for CliError {
    fn from(e: CorrelationError) -> Self {
        match e {
            CorrelationError::Sieve(s) => s.into(),
            CorrelationError::Flows(f) => f.into(),
            CorrelationError::QuadratureNotConverged { .. } => CliError::Precision(e.to_string()),
            CorrelationError::InvalidInput(_) => CliError::Config(e.to_string()),
            CorrelationError::DegenerateFit(_) => CliError::Failed(e.to_string()),
        }
    }
}
