use gi_vqa_core::Error as CoreError;

/// Stable exit codes: 2 for input/schema/IO problems, 3 for degenerate
/// splits, 4 for prediction join failures.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> CliError {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> CliError {
        CliError::new(2, message)
    }

    pub fn join(message: impl Into<String>) -> CliError {
        CliError::new(4, message)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        let code = match e {
            CoreError::DegenerateSplit { .. } => 3,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::input(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::input(format!("json error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
