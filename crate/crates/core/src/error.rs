use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("world `{0}` has infinite height")]
    InfiniteHeight(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid PCP input: {0}")]
    Pcp(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("variable `{0}` is not fresh")]
    VariableClash(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    /// Guard trips are reported separately from user errors by the CLI.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
