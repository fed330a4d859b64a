use thiserror::Error;

pub type Result<T> = std::result::Result<T, BohrError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BohrError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("divergent tail: ratio {ratio} is not below 1")]
    DivergentTail { ratio: f64 },

    #[error("pole proximity: |1 - a s| = {denominator:e}")]
    PoleProximity { denominator: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("no sign change on a {grid_points}-point grid over (0, {hi}]: {note}")]
    NoSignChangeOnGrid { hi: f64, grid_points: usize, note: String },
}

pub(crate) fn invalid(msg: impl Into<String>) -> BohrError {
    BohrError::InvalidParameter(msg.into())
}
