use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DyadError {
    #[error("domain overflow: {0}")]
    DomainOverflow(String),
    #[error("resolution: {0}")]
    Resolution(String),
    #[error("mesh: {0}")]
    Mesh(String),
    #[error("parameter: {0}")]
    Parameter(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("integrability: {0}")]
    Integrability(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, DyadError>;
