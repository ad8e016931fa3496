use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (max |U·U† − 1| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("{name} = {value} is outside the legal range [{min}, {max}]")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{0} must be a unit vector (|v| = {1})")]
    NotUnitVector(&'static str, f64),

    #[error("overlap magnitude mu_s = {0} must lie in [0, 1]")]
    OverlapOutOfRange(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("universal state still has unresolved weight {0:e}")]
    StateNotFinal(f64),

    #[error("value {0} is not finite")]
    NonFinite(f64),
}
