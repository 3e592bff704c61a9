use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite evaluation at t = {t}")]
    Evaluation { t: f64 },

    #[error("singular matrix")]
    Singular,

    #[error("target near boundary image: clearance {clearance:e} below tolerance {tolerance:e}")]
    TargetNearBoundaryImage { clearance: f64, tolerance: f64 },

    #[error("non-regular value: |det J| = {det:e} at a preimage after {attempts} perturbations")]
    NonRegularValue { det: f64, attempts: usize },

    #[error("unstable degree: {coarse} with the base seed grid, {fine} after refinement")]
    UnstableDegree { coarse: i64, fine: i64 },

    #[error("no existence certificate: degree is 0")]
    NoExistenceCertificate,

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("unknown name `{name}`; available: {available}")]
    UnknownName { name: String, available: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
