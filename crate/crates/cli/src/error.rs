use asai_core::AsaiError;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, msg: msg.into() }
    }

    pub fn verify(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_VERIFY, msg: msg.into() }
    }
}

impl From<AsaiError> for CliError {
    fn from(e: AsaiError) -> Self {
        let code = match e {
            AsaiError::Consistency(_) | AsaiError::Quadrature(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        CliError { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(format!("I/O error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
