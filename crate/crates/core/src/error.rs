use thiserror::Error;

/// Errors raised while reading an edge list. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: duplicate edge `{u}`-`{v}`")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("line {line}: invalid weight `{text}` (expected a positive decimal or p/q)")]
    Weight { line: usize, text: String },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::SelfLoop { line, .. }
            | ParseError::DuplicateEdge { line, .. }
            | ParseError::Weight { line, .. }
            | ParseError::Malformed { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("vertex index {index} out of range for a graph with {n} vertices")]
    InvalidVertex { index: usize, n: usize },
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("vertices {x} and {y} lie in different connected components")]
    Unreachable { x: usize, y: usize },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    Convergence { sweeps: usize, off_norm: f64 },
    #[error("exponent estimates did not stabilise: {trace:?}")]
    NoConvergence {
        /// Stable rounded exponent, if one was reached before the count failed to settle.
        d_hat: Option<usize>,
        trace: Vec<f64>,
    },
    #[error("kernel sample fell below the positivity floor at t = {t:e} before convergence")]
    PositivityFloor { t: f64, trace: Vec<f64> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
