use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cap exceeded: {which} (limit {limit})")]
    CapExceeded { which: &'static str, limit: usize },

    #[error("invalid colour set: {0}")]
    InvalidSet(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid pregraph: {0}")]
    Pregraph(String),

    #[error("invalid maniplex: {0}")]
    Maniplex(String),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("not an automorphism")]
    NotAutomorphism,

    #[error("maniplex is not regular")]
    NotRegular,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("relation failed: {0}")]
    Relation(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
