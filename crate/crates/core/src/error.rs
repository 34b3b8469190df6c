use thiserror::Error;

/// Errors produced by the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    /// Inputs violate a documented precondition (mesh alignment, degree range, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Construction of a quadrature rule failed.
    #[error("quadrature construction failed: {0}")]
    Quadrature(String),

    /// A point lookup fell outside the mesh.
    #[error("point {0:?} lies outside the mesh")]
    OutsideMesh(Vec<f64>),

    /// A user supplied function could not be evaluated.
    #[error("evaluation failed: {0}")]
    Evaluation(String),

    /// The slab system could not be factorized.
    #[error("slab {slab}: singular system ({reason})")]
    SingularSlab { slab: usize, reason: String },

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
