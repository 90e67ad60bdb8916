use thiserror::Error;

/// Failure modes shared by every operation in the crate.
///
/// The CLI maps [`Error::Parse`] to exit code 1, [`Error::Consistency`] to
/// exit code 3 and everything else to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid fan: {0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An identity that holds by theorem failed to verify. Never expected.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole: x vanishes on a ray of cone {}", crate::fan::one_based(.0))]
    Pole(Vec<usize>),
    #[error("non-simple vertex with active facets {}", crate::fan::one_based(.0))]
    NonSimple(Vec<usize>),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("no convergence after {iterations} iterations (last iterate {last:?})")]
    Convergence { iterations: usize, last: Vec<f64> },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::Consistency(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
