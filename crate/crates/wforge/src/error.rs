use wforge_core::Error as CoreError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config file, family, parameter or output path.
    #[error("{0}")]
    Config(String),
    /// The numerics could not produce a result for a valid request.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            Syntax { .. }
            | UnknownParameter(_)
            | NonPolynomialRadicand { .. }
            | InvalidSpec(_)
            | UnknownFamily(_)
            | ParamOutOfRange { .. }
            | MissingParameter(_)
            | NoVertexConfiguration(_)
            | InvalidArgument(_)
            | NotUnit { .. }
            | DomainError { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io: {}", e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json: {}", e))
    }
}

pub type CliResult<T> = Result<T, CliError>;
