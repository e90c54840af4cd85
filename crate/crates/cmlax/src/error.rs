use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "argument {arg} lies within {distance:.3e} of a pole (guard {guard:.1e}) in {context}"
    )]
    PoleProximity {
        context: &'static str,
        arg: String,
        distance: f64,
        guard: f64,
    },
    #[error("precision: {0}")]
    Precision(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("site collision: both sites are {0}")]
    SiteCollision(usize),
    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("inadmissible configuration for {system}: {reason}")]
    Inadmissible { system: String, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("missing derivative of order {0} in coefficient field")]
    MissingDerivative(usize),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("integration: {0}")]
    Integration(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
