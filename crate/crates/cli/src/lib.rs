//! Command-line front end: word-data files, the certificate pipeline and
//! one subcommand per individual computation.

pub mod certify;
pub mod commands;
pub mod word_data;

use thiserror::Error;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified = 0,
    HypothesisFails = 1,
    InputError = 2,
    InternalError = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Input(_) => Status::InputError,
            CliError::Internal(_) => Status::InternalError,
        }
    }
}

impl From<hecke_cert::coxeter::CoxeterError> for CliError {
    fn from(e: hecke_cert::coxeter::CoxeterError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<hecke_cert::subexpr::SubexprError> for CliError {
    fn from(e: hecke_cert::subexpr::SubexprError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<hecke_cert::spherical::SphericalError> for CliError {
    fn from(e: hecke_cert::spherical::SphericalError) -> Self {
        use hecke_cert::spherical::SphericalError as E;
        match e {
            E::NotMinimal(..) | E::ParabolicMismatch(..) | E::Subexpr(_) => {
                CliError::Input(e.to_string())
            }
            E::Laurent(_) | E::PullbackMismatch(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<hecke_cert::demazure::DemazureError> for CliError {
    fn from(e: hecke_cert::demazure::DemazureError) -> Self {
        use hecke_cert::demazure::DemazureError as E;
        match e {
            E::Parse { .. } | E::EraseOutOfRange { .. } => CliError::Input(e.to_string()),
            E::DegreeAuditFailure { .. } | E::Poly(_) => CliError::Internal(e.to_string()),
        }
    }
}
