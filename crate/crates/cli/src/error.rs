use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] oigb_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("session line {line}: {msg}")]
    Session { line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for malformed input, 3 for exceeded resource caps.
    pub fn exit_code(&self) -> u8 {
        use oigb_core::Error as E;
        match self {
            CliError::Core(E::WidthCapExceeded(_) | E::WidthTooLarge(_) | E::UncertifiedWidth { .. }) => 3,
            _ => 2,
        }
    }
}
