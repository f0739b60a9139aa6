use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("no citation baseline for any subject category of publication {pub_id}")]
    MissingBaseline { pub_id: String },

    #[error("author position {position} out of range 1..={authors} for publication {pub_id}")]
    PositionOutOfRange {
        pub_id: String,
        position: usize,
        authors: usize,
    },

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn format(path: &std::path::Path, line: u64, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.to_path_buf(),
            line,
            message: msg.into(),
        }
    }

    /// Process exit code for this error: 2 for bad input, 3 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Output { .. } | Error::PositionOutOfRange { .. } => 3,
            _ => 2,
        }
    }
}
