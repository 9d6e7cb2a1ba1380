//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("weighted norm is infinite: requested q = {q} exceeds tail exponent {q_tail}")]
    InfiniteNorm { q: f64, q_tail: f64 },

    #[error("insufficient decay: {0}")]
    Integrability(String),

    #[error("minimizer did not converge (best value found: {best})")]
    MinimizerDiverged { best: f64 },

    #[error("duplicate sample points with differing values: seminorm is infinite")]
    InfiniteSeminorm,

    #[error("lower-bound specification violated: {0}")]
    LowerBound(String),

    #[error("solver stability failure at step {step}: min value {min_value} below -{tolerance}")]
    Stability {
        step: usize,
        min_value: f64,
        tolerance: f64,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
