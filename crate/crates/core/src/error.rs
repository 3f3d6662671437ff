use thiserror::Error;

use crate::problem::{Violation, ViolationKind};

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient jet: need derivatives up to order {required}, trajectory stores {available}")]
    InsufficientJet { required: usize, available: usize },

    #[error("insufficient smoothness: {what} must provide derivatives up to order {required}, it provides {available}")]
    InsufficientSmoothness {
        what: String,
        required: usize,
        available: usize,
    },

    #[error("invalid problem: {}", format_violations(.0))]
    InvalidProblem(Vec<Violation>),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate family: every discrepancy is zero")]
    DegenerateFamily,

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("schema error at `{key}`: {message}")]
    Schema { key: String, message: String },
}

impl Error {
    pub(crate) fn schema(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for failures of the numerical pipeline (as opposed to bad input).
    /// A problem whose only defect is missing smoothness counts as numerical.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::InvalidProblem(v) => {
                !v.is_empty()
                    && v.iter().all(|x| {
                        matches!(
                            x.kind,
                            ViolationKind::CoefficientSmoothness | ViolationKind::RhsSmoothness
                        )
                    })
            }
            _ => matches!(
                self,
                Error::InsufficientJet { .. }
                    | Error::InsufficientSmoothness { .. }
                    | Error::Numerical(_)
                    | Error::DegenerateFamily
            ),
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
