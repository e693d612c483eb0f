use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("{function} has a pole at z = {z}")]
    Pole { function: &'static str, z: Complex64 },

    /// The requested point lies on (or within the guard distance of) the
    /// singular set of the r-matrix family.
    #[error("singular configuration: {detail}")]
    SingularConfiguration { root: Option<String>, detail: String },

    #[error("trajectory approached the singular set at t = {t}: {detail}")]
    SingularApproach { t: f64, detail: String },

    #[error("invalid integration step: {0}")]
    Step(String),

    #[error("invalid root subset: {0}")]
    RootSubset(String),

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{context}")]
    Context { context: String, source: Box<Error> },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The error beneath any layers of context.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root_cause(),
            other => other,
        }
    }

    pub(crate) fn singular_root(label: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::SingularConfiguration {
            root: Some(label.into()),
            detail: detail.into(),
        }
    }

    pub(crate) fn singular(detail: impl Into<String>) -> Self {
        Error::SingularConfiguration {
            root: None,
            detail: detail.into(),
        }
    }
}
