use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report. Each variant maps to a stable
/// machine-readable code (see [`Error::code`]) used on the command line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a WebVTT file: {0}")]
    NotVtt(String),

    #[error("transcript contains no well-formed cues")]
    EmptyTranscript,

    #[error("bad timestamp `{0}`")]
    BadTimestamp(String),

    #[error("bad meeting metadata: {0}")]
    BadMeta(String),

    #[error("no utterances to build turns from")]
    EmptyInput,

    #[error("series needs at least 2 durations, got {0}")]
    TooShort(usize),

    #[error("duration #{index} is not positive ({value})")]
    NonpositiveDuration { index: usize, value: f64 },

    #[error("manifest line {line}: {reason}")]
    BadManifest { line: usize, reason: String },

    #[error("bad report: {0}")]
    BadReport(String),

    #[error("bad configuration: {0}")]
    BadConfig(String),

    #[error("{}: {source}", path.display())]
    NotFound { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotVtt(_) => "NOT_VTT",
            Error::EmptyTranscript => "EMPTY_TRANSCRIPT",
            Error::BadTimestamp(_) => "BAD_TIMESTAMP",
            Error::BadMeta(_) => "BAD_META",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::TooShort(_) => "TOO_SHORT",
            Error::NonpositiveDuration { .. } => "NONPOSITIVE_DURATION",
            Error::BadManifest { .. } => "BAD_MANIFEST",
            Error::BadReport(_) => "BAD_REPORT",
            Error::BadConfig(_) => "BAD_CONFIG",
            Error::NotFound { .. } => "NOT_FOUND",
            Error::Io { .. } => "IO",
        }
    }

    /// Wraps an I/O error on `path`, separating missing files from other failures.
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        let path = path.into();
        if source.kind() == io::ErrorKind::NotFound {
            Error::NotFound { path, source }
        } else {
            Error::Io { path, source }
        }
    }
}

/// Reads a whole file, mapping failures onto [`Error::NotFound`] / [`Error::Io`].
pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Vec<u8>> {
    let path = path.as_ref();
    std::fs::read(path).map_err(|e| Error::io(path, e))
}
