//! Challenge Index model of binary risky choice.
//!
//! A problem offers a default prospect and a bold one. The Challenge Index
//! scores how hard it is to abandon the default, and its correlation with
//! the observed bold rate across problems is the fitting objective.

pub mod analysis;
pub mod cli;
pub mod crossval;
pub mod fit;
pub mod io;
pub mod model;
pub mod problem;
pub mod stats;
pub mod synth;

use thiserror::Error;

pub use model::{challenge_index, ParamSet, Tying, WeightingForm};
pub use problem::{canonicalize_problem, BinaryProblem, Domain, Money, Prospect};

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Problem(#[from] problem::ProblemError),
    #[error(transparent)]
    Dataset(#[from] problem::DatasetError),
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Stats(#[from] stats::StatsError),
    #[error(transparent)]
    Fit(#[from] fit::FitError),
    #[error(transparent)]
    CrossVal(#[from] crossval::CrossValError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error("{0}")]
    Mismatch(String),
}

impl Error {
    /// 1 usage, 2 parse, 3 validation, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Io(e) if e.is_validation() => 3,
            Error::Io(_) => 2,
            Error::Problem(_) | Error::Dataset(_) => 3,
            Error::Model(model::ModelError::ParameterOutOfBounds { .. })
            | Error::Model(model::ModelError::TyingViolated(_))
            | Error::Model(model::ModelError::FreeParameterCount { .. }) => 3,
            Error::Model(_) | Error::Stats(_) | Error::Mismatch(_) => 4,
            Error::Fit(e) => match e {
                fit::FitError::InvalidConfig(_) => 1,
                fit::FitError::TooFewProblems(_)
                | fit::FitError::EmptyProblem(_)
                | fit::FitError::InvalidObservation { .. } => 3,
                _ => 4,
            },
            Error::CrossVal(crossval::CrossValError::Fold { .. }) => 4,
            Error::CrossVal(_) => 3,
            Error::Analysis(analysis::AnalysisError::Model(_))
            | Error::Analysis(analysis::AnalysisError::Stats(_)) => 4,
            Error::Analysis(_) => 3,
        }
    }
}
