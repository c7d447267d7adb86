use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// exp(x^2/2) or a quantity derived from it left the f64 range.
    /// Tagged rather than saturated so tail experiments can tell
    /// "genuinely ~0" apart from "not computable".
    #[error("overflow: exp(x^2/2) not representable at x = {x}")]
    Overflow { x: f64 },

    #[error("quantile solver exceeded {max_iter} iterations (tolerance misconfiguration?)")]
    IterationCap { max_iter: usize },

    #[error("horizon exhausted: local time reached {reached} but level {needed} was required")]
    HorizonExhausted { needed: f64, reached: f64 },

    #[error("frequency index {index} leaves the exact-phase regime (n_k >= 2^64)")]
    FrequencyOverflow { index: usize },

    #[error("gauge is non-positive at t = {t}")]
    NonPositiveGauge { t: f64 },

    #[error("empty sample set")]
    EmptySample,

    #[error("time {t} outside path range [0, {horizon}]")]
    OutOfRange { t: f64, horizon: f64 },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
