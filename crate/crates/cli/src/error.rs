use std::fmt;

use serde::Serialize;

/// What went wrong, coarse enough to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Validation,
    Truncation,
    Solver,
    Cancelled,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> u8 {
        match self {
            ErrorKind::Validation => 2,
            ErrorKind::Truncation => 3,
            ErrorKind::Solver => 4,
            ErrorKind::Cancelled => 130,
            ErrorKind::Io => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    /// Dotted path of the offending scenario field, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Validation, field: Some(field.into()), message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Io, field: None, message: message.into() }
    }

    /// Attaches a field path to a library error raised while resolving it.
    pub fn at(field: impl Into<String>, err: fio_nuclear::Error) -> Self {
        CliError { field: Some(field.into()), ..CliError::from(err) }
    }

    pub fn exit_code(&self) -> u8 {
        self.kind.exit_code()
    }

    /// The JSON object written to standard error.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Envelope<'a> {
            error: &'a CliError,
            exit_code: u8,
        }
        serde_json::to_string(&Envelope { error: self, exit_code: self.exit_code() }).expect("error serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "{field}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fio_nuclear::Error> for CliError {
    fn from(err: fio_nuclear::Error) -> Self {
        use fio_nuclear::Error as E;
        let kind = match err {
            E::Truncation { .. } => ErrorKind::Truncation,
            E::Solver(_) => ErrorKind::Solver,
            E::Cancelled => ErrorKind::Cancelled,
            _ => ErrorKind::Validation,
        };
        CliError { kind, field: None, message: err.to_string() }
    }
}
