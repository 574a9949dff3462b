use qmvw_core::Error;
use thiserror::Error;

/// Process outcome other than success: exit code 2 for bad input, 1 for
/// verification or mathematical failure.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Math(_) => 1,
        }
    }

    /// Library errors: malformed data is an input error, everything else
    /// a failure of the computation.
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::DimensionMismatch(_) | Error::BadParams(_) => {
                Failure::Input(e.to_string())
            }
            Error::NotMember(_) => Failure::Input(e.to_string()),
            other => Failure::Math(other.to_string()),
        }
    }
}
