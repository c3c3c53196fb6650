use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{what} exceeded the limit of {limit}")]
    ResourceExhausted { what: String, limit: usize },
    #[error("placement is not a Sidon set: {a} - {b} = {c} - {d}")]
    NotSidon { a: i64, b: i64, c: i64, d: i64 },
    #[error("generator {index} has an odd right-multiplication permutation")]
    NegativeSign { index: usize },
    #[error("generator {index} is the identity")]
    IdentityGenerator { index: usize },
    #[error("balls have different radii ({0} vs {1})")]
    RadiusMismatch(u32, u32),
    #[error("balls have different color counts ({0} vs {1})")]
    ColorMismatch(usize, usize),
    #[error("word letter {letter} is out of range for {available} generators")]
    LetterOutOfRange { letter: i64, available: usize },
    #[error("stage {stage} failed: {reason}")]
    Stage { stage: usize, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_resource(&self) -> bool {
        match self {
            Error::ResourceExhausted { .. } => true,
            Error::Stage { reason, .. } => reason.contains("exceeded the limit"),
            _ => false,
        }
    }
}
