use dyadlab_core::DyadError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("certification: {0}")]
    Certification(String),
    #[error(transparent)]
    Core(#[from] DyadError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// Process exit code: 2 for bad input, 3 for a failed certification.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Core(DyadError::Parameter(_) | DyadError::Integrability(_) | DyadError::Resolution(_)) => 2,
            LabError::Certification(_) => 3,
            _ => 1,
        }
    }

    /// Short machine-readable tag for the one-line error report.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "config",
            LabError::Certification(_) => "certification",
            LabError::Core(_) => "core",
            LabError::Io(_) => "io",
            LabError::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
