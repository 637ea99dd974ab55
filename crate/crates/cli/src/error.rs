use serde_json::json;
use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    VerdictFail = 1,
    Usage = 2,
    Internal = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input does not match the schema")]
    Schema(Vec<String>),
    #[error("invalid input: {0}")]
    Input(#[from] ri_ergodic::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o failure on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Schema(_) | CliError::Input(_) | CliError::Json(_) => ExitCode::Usage,
            CliError::Io { .. } | CliError::Internal(_) => ExitCode::Internal,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema",
            CliError::Input(_) => "input",
            CliError::Json(_) => "json",
            CliError::Io { .. } => "io",
            CliError::Internal(_) => "internal",
        }
    }

    /// The machine-readable error object written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let details = match self {
            CliError::Schema(errors) => errors.clone(),
            _ => Vec::new(),
        };
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "details": details } })
    }
}
