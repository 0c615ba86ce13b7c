use gencalc::baseline::BaselineError;
use gencalc::expr::ExprError;
use gencalc::instafreq::InstafreqError;
use gencalc::numerics::PolicyError;
use gencalc::sigio::SigioError;
use gencalc::{FamilyError, GcalcError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("expression: {0}")]
    Expr(#[from] ExprError),
    #[error("family: {0}")]
    Family(#[from] FamilyError),
    #[error("limit policy: {0}")]
    Policy(#[from] PolicyError),
    #[error("gcalc: {0}")]
    Gcalc(GcalcError),
    #[error("instafreq: {0}")]
    Instafreq(InstafreqError),
    #[error("baseline: {0}")]
    Baseline(#[from] BaselineError),
    #[error("sigio: {0}")]
    Sigio(#[from] SigioError),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    NotConverged(String),
}

impl From<GcalcError> for CliError {
    fn from(e: GcalcError) -> Self {
        match e {
            GcalcError::Family(f) => CliError::Family(f),
            GcalcError::Policy(p) => CliError::Policy(p),
            GcalcError::NotConverged { .. } => CliError::NotConverged(format!("gcalc: {e}")),
            other => CliError::Gcalc(other),
        }
    }
}

impl From<InstafreqError> for CliError {
    fn from(e: InstafreqError) -> Self {
        match e {
            InstafreqError::Gcalc(g) => g.into(),
            InstafreqError::EmptyTrace => CliError::NotConverged(format!("instafreq: {e}")),
            other => CliError::Instafreq(other),
        }
    }
}

impl CliError {
    /// 1 usage, 2 numeric non-convergence, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotConverged(_) => 2,
            CliError::Io(_) | CliError::Sigio(_) => 3,
            _ => 1,
        }
    }
}
