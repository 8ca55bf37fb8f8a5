use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate superposition: norm squared {0:e} is not positive")]
    DegenerateNorm(f64),

    #[error("the diagonal approximation is only defined for a uniform cat without phases or angle overrides")]
    NonUniformCat,

    #[error("root index {0} outside the supported range 1..=40")]
    RootIndex(usize),

    #[error("grid does not cover the state support: {0}")]
    Coverage(String),

    #[error("Wigner field has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("number-basis cutoff {cutoff} not certified for amplitude {magnitude} (need at least {required})")]
    NotConverged {
        cutoff: usize,
        magnitude: f64,
        required: usize,
    },

    #[error("cannot calibrate a criterion: {0}")]
    Calibration(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
