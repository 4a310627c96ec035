use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HydroError {
    #[error(transparent)]
    Core(#[from] sep_core::Error),
    /// Invalid configuration; `field` is the dotted path of the offending entry.
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Format(String),
}

impl HydroError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        HydroError::Config { field: field.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HydroError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = HydroError> = std::result::Result<T, E>;
