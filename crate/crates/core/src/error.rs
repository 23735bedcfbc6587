use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("Simpson quadrature needs an even, non-zero panel count, got {0}")]
    InvalidPanels(usize),

    #[error("amplitudes are not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("matrix is not Hermitian: max deviation {0:e}")]
    NotHermitian(f64),

    #[error("unsupported initial state: {0}")]
    UnsupportedState(&'static str),

    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),

    #[error("step size too large: single-step trace drift {drift:e} at t = {t}")]
    StepTooLarge { drift: f64, t: f64 },

    #[error("series needs at least 3 points, got {0}")]
    SeriesTooShort(usize),

    #[error("quantum Fisher information must be non-negative, got {0}")]
    NegativeQfi(f64),

    #[error("number of trials must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
