use thiserror::Error;

/// Errors produced by graph construction, decoding and spectral analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range for a graph with {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("check node {check} has degree {degree}, expected 2")]
    CheckDegree { check: usize, degree: usize },

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("flow graph is not strongly connected")]
    NotStronglyConnected,

    #[error("{index} is not a valid cyclic index for this flow graph (period {period})")]
    InvalidIndex { index: usize, period: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("flow matrix is not irreducible")]
    NotIrreducible,

    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("matrix of size {size} exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("the primitive limit form requires h = 1, this flow matrix has h = {h}")]
    ImprimitiveNotSupported { h: usize },

    #[error("hypotheses not satisfied: {0}")]
    Validation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numeric escape at iteration {iteration}")]
    NumericEscape { iteration: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
