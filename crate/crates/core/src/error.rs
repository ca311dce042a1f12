use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty domain")]
    EmptyDomain,

    #[error("unknown item {0:?}")]
    UnknownItem(String),

    #[error("limit must be >= 1")]
    InvalidLimit,

    #[error("out-of-order append: oid {oid} after {last}")]
    OutOfOrderAppend { oid: u32, last: u32 },

    #[error("no statistics: empty collection")]
    NoStatistics,

    #[error("right collection is empty")]
    EmptyRight,

    #[error("config conflict: {0}")]
    ConfigConflict(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(String),

    #[error("{path}: line {line} too long ({tokens} tokens, cap {cap})")]
    LineTooLong {
        path: PathBuf,
        line: usize,
        tokens: usize,
        cap: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("report: {0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
