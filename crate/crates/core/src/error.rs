use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument outside the domain ({msg})")]
    Domain { func: &'static str, msg: String },
    #[error("singularity in {term}: {msg}")]
    Singularity { term: String, msg: String },
    #[error("{what} did not converge: {msg}")]
    NonConvergence { what: String, msg: String },
    #[error("{func}: result overflows")]
    Overflow { func: &'static str },
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn singular(term: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Singularity {
            term: term.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn no_conv(what: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::NonConvergence {
            what: what.into(),
            msg: msg.into(),
        }
    }

    pub fn is_singularity(&self) -> bool {
        matches!(self, Error::Singularity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
