use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A sideband pulse would have pushed amplitude above the Fock cutoff.
#[derive(Debug, Clone, PartialEq, Error)]
#[error(
    "Fock cutoff n_max={n_max} too small: ion {ion} holds probability {probability:e} on its \
     excited level with n = n_max{}{}",
    step.map(|s| format!(" (step {s})")).unwrap_or_default(),
    trial.map(|t| format!(" (trial {t})")).unwrap_or_default()
)]
pub struct TruncationError {
    pub ion: usize,
    pub n_max: usize,
    pub probability: f64,
    /// 1-based index of the failing step, once known.
    pub step: Option<usize>,
    /// 0-based Monte Carlo trial index, once known.
    pub trial: Option<usize>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Truncation(#[from] TruncationError),

    #[error("ion {ion} leaks probability {population:e} into e'; stabilizers are only defined on the g/e qubit")]
    Leakage { ion: usize, population: f64 },

    #[error("malformed sequence file: {0}")]
    Format(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Truncation(_) => 3,
            Error::Io(_) => 1,
            Error::Validation(_) | Error::Leakage { .. } | Error::Format(_) => 2,
        }
    }
}
