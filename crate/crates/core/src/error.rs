use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A matrix violates a connectivity invariant (square, symmetric, finite).
    #[error("invalid matrix ({context}): {reason}")]
    Validation { context: String, reason: String },

    #[error("cohort error: {0}")]
    Cohort(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("degenerate hypergraph: {0}")]
    Degenerate(String),

    #[error("non-finite loss while probing {param}[{index}]")]
    Instability { param: String, index: usize },

    #[error("training failed{}: {message}", subject.as_ref().map(|s| format!(" for subject {s}")).unwrap_or_default())]
    Training {
        subject: Option<String>,
        message: String,
    },

    #[error("protocol error: {0}")]
    Protocol(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn training(message: impl Into<String>) -> Self {
        Error::Training {
            subject: None,
            message: message.into(),
        }
    }

    /// Attach a subject id to a training error; other variants pass through.
    pub fn with_subject(self, subject_id: &str) -> Self {
        match self {
            Error::Training { subject: None, message } => Error::Training {
                subject: Some(subject_id.to_string()),
                message,
            },
            other => other,
        }
    }

    /// True for errors caused by bad input or configuration rather than a
    /// failure during computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Parse { .. }
                | Error::Validation { .. }
                | Error::Cohort(_)
                | Error::Parameter(_)
                | Error::Protocol(_)
        )
    }
}
