use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Runtime failure or failed checks; exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<catoverlap::Error> for CliError {
    fn from(e: catoverlap::Error) -> Self {
        match e {
            catoverlap::Error::InvalidInput(_)
            | catoverlap::Error::NonUniformCat
            | catoverlap::Error::RootIndex(_)
            | catoverlap::Error::Coverage(_)
            | catoverlap::Error::NotConverged { .. }
            | catoverlap::Error::Calibration(_) => CliError::Usage(e.to_string()),
            catoverlap::Error::DegenerateNorm(_) | catoverlap::Error::ImaginaryResidue(_) => {
                CliError::Failure(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}
