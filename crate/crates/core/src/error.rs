use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} generators vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("letter {letter} outside alphabet 1..={n}")]
    LetterOutOfRange { letter: usize, n: usize },

    #[error("alphabet size must be positive")]
    EmptyAlphabet,

    #[error("affine multi-index has negative exponent {exponent} at position {position}")]
    NegativeExponent { position: usize, exponent: i64 },

    #[error("multi-index flavor mismatch")]
    FlavorMismatch,

    #[error("deformation parameter q must be nonzero")]
    ZeroQ,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("power iteration did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("work budget exceeded: {required} > {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("tuple does not commute: commutator residual {residual:e}")]
    NonCommuting { residual: f64 },

    #[error("malformed expression: {0}")]
    Malformed(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
