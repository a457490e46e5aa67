use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    /// Malformed input: missing columns, unparsable rows, wrong document format.
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] shotchart_core::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 usage, 3 data or schema, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        use shotchart_core::Error as C;
        match self {
            Error::Usage(_) | Error::Core(C::Usage(_)) => 2,
            Error::Data(_) | Error::Io { .. } => 3,
            Error::Core(C::Domain(_) | C::InsufficientData(_)) => 3,
            Error::Numerical(_) | Error::Core(C::SingularModel(_)) => 4,
        }
    }
}
