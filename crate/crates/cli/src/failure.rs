use krein_core::Error;

pub const INPUT_ERROR: u8 = 2;
pub const SOLVER_FAILURE: u8 = 3;

/// A command that could not produce its report.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: INPUT_ERROR, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch(_)
            | Error::NotHermitian { .. }
            | Error::ProfileNotOdd(_)
            | Error::ProfileNotNormalized(_) => INPUT_ERROR,
            _ => SOLVER_FAILURE,
        };
        Failure { code, message: format!("{}: {e}", e.name()) }
    }
}
