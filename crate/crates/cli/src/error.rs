use std::fmt;
use std::process::ExitCode;

use photocount::error::{Error, FormatError, SamplerError};

#[derive(Debug)]
pub enum CliError {
    /// Invalid or inconsistent configuration. Exit code 2.
    Config(String),
    /// Missing or unreadable files. Exit code 3.
    Io(String),
    /// A verification check failed. Exit code 4.
    Verification(String),
    /// Any other failure. Exit code 1.
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Other(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Format(_) => CliError::Io(msg),
            Error::Sampler(SamplerError::Spec(_) | SamplerError::Aliasing { .. })
            | Error::Sampler(SamplerError::Trace(_) | SamplerError::EmptyBatch)
            | Error::Classify(_) => CliError::Config(msg),
            _ => CliError::Other(msg),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Io(e.to_string())
    }
}

macro_rules! via_core {
    ($($t:ty),*) => {
        $( impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        } )*
    };
}

via_core!(
    SamplerError,
    photocount::error::MomentsError,
    photocount::error::ClassifyError,
    photocount::error::WidebandError
);
