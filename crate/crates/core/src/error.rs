use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension n = {n} not supported here (need n >= {min})")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("vector is not unit length (|v| = {norm})")]
    NotUnit { norm: f64 },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// The closed formula only covers offsets beyond the edge distance `1/√2`.
    #[error("offset t = {t} is outside the single-vertex regime t > 1/sqrt(2); use the Monte Carlo oracle")]
    UnsupportedRegime { t: f64 },

    #[error("ill-conditioned normal: a1^2 - a{index}^2 = {gap:e}")]
    Conditioning { index: usize, gap: f64 },
}
