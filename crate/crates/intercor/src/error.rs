use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Unreadable or invalid configuration; maps to exit status 2.
    #[error("config error: {0}")]
    Config(String),
    #[error("config has {} problem(s):\n  {}", .0.len(), .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("serializing json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Core(#[from] intercor_core::Error),
}

impl RunError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, RunError::Config(_) | RunError::Invalid(_))
    }
}
