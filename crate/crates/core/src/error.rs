use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("division by X is not exact: term {0} has no X factor")]
    NonExactDivision(String),

    #[error("expression is not real: imaginary residue {residue:.3e} at X={x}, T={t}")]
    NotReal { residue: f64, x: f64, t: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expression is not separable: {0}")]
    NotSeparable(String),

    #[error("abscissa condition violated: {0}")]
    Abscissa(String),

    #[error("missing component u_{index} (list has {len} items)")]
    MissingComponent { index: usize, len: usize },

    #[error("singular step {step} left the basis: {source}")]
    SingularStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
