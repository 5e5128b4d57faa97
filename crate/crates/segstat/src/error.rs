use std::path::PathBuf;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] segstat_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{} input file(s) missing:\n  {}", .0.len(), .0.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join("\n  "))]
    MissingFiles(Vec<PathBuf>),
    #[error("{0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 for bad input, 2 when the tool itself broke an invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> CliError {
        CliError::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
