use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite initial sample at cell ({i}, {j}): {value}")]
    NonFiniteSample { i: usize, j: usize, value: f64 },

    #[error("non-finite flux derivative at u = {0}")]
    NonFiniteDerivative(f64),

    #[error("CFL violation: value {value} escapes [{lo}, {hi}] in column {column}")]
    CflViolation {
        column: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("non-finite value produced at step {step}")]
    NonFinite { step: usize },

    #[error("solver aborted at step {step}: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("test function support violation: {0}")]
    SupportViolation(String),

    #[error("fields live on different grids")]
    MismatchedGrids,

    #[error("empty cone at t = {t}: L - M t = {half_width}")]
    EmptyCone { t: f64, half_width: f64 },

    #[error("rate fit needs at least 3 usable pairs, got {0}")]
    InsufficientPairs(usize),

    #[error("degenerate rate fit: {0}")]
    DegenerateFit(String),

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("config error at key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("malformed field snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
