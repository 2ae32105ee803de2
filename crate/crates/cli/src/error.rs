//! Exit-code carrying errors.

use cubic_lab::Error;

/// Exit status for a failed check, budget overrun or I/O problem.
pub const EXIT_FAILURE: u8 = 1;
/// Exit status for malformed invocations.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError { code: EXIT_FAILURE, message: message.into() }
    }
}

/// Malformed input maps to a usage error, everything else to a failure.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::DegreeTooHigh(_)
            | Error::VariableOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::NotCoprime(..)
            | Error::UnknownCase(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        CliError { code, message: e.to_string() }
    }
}
