use std::fmt;

/// CLI failure, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or I/O. Exit code 1.
    Usage(String),
    /// The physics rejected the input. Exit code 2.
    Domain(String),
    /// `validate` found a failing check. Exit code 3.
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<pairfield::Error> for CliError {
    fn from(e: pairfield::Error) -> Self {
        match e {
            pairfield::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            pairfield::Error::DegeneratePair => CliError::Domain(format!(
                "{e}: an antisymmetric pair needs a nonzero relative coordinate or momentum"
            )),
            other => CliError::Domain(other.to_string()),
        }
    }
}
