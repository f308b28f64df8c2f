use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown experiment `{0}` (see `dixlab list`)")]
    UnknownExperiment(String),
    #[error("config: {0}")]
    Config(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] dixlab_core::error::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format { line, message: message.into() }
    }

    /// Errors caused by the invocation rather than by the computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::UnknownExperiment(_) | Error::Config(_))
    }
}
