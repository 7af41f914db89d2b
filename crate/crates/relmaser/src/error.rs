use std::path::PathBuf;

/// Scenario-file errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("syntax error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Syntax {
        message: String,
        line: Option<usize>,
    },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("`{key}`: {constraint}")]
    Constraint { key: String, constraint: String },
}

impl ConfigError {
    pub fn category(&self) -> &'static str {
        match self {
            ConfigError::Syntax { .. } => "syntax",
            ConfigError::UnknownKey { .. } => "unknown-key",
            ConfigError::Constraint { .. } => "constraint",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{source_name}: {error}")]
    Config {
        source_name: String,
        error: ConfigError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Solver(#[from] relmaser_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Check(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            AppError::Config { error, .. } => error.category(),
            AppError::Io { .. } => "io",
            AppError::Solver(e) => match e {
                relmaser_core::Error::NonFinite { .. } => "non-finite",
                _ => "runtime",
            },
            AppError::Usage(_) => "usage",
            AppError::Format(_) => "format",
            AppError::Check(_) => "check",
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Config { .. } => 3,
            AppError::Io { .. } => 4,
            AppError::Solver(_) | AppError::Format(_) => 5,
            AppError::Check(_) => 6,
        }
    }
}
