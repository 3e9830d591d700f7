use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation point {t} lies outside the tabulated range [{lo}, {hi}]")]
    Extrapolation { t: f64, lo: f64, hi: f64 },

    #[error("degenerate parameter function: {0}")]
    DegeneratePhi(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tabulated parameter function has no asymptotic profile")]
    NoProfile,

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("witness could not be constructed: {0}")]
    UndeterminedWitness(String),

    #[error("wavelet order {got} too small: need at least {required} vanishing moments")]
    InsufficientMoments { required: u32, got: u32 },

    #[error("depth {depth} exceeds sample resolution Js = {js}")]
    Resolution { depth: u32, js: u32 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
