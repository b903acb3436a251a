use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid triple system: {0}")]
    InvalidSystem(String),
    #[error("payload shape {found:?} does not match the system shape {expected:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("element is not a member of {system} (residual {residual:.3e})")]
    MembershipViolation { system: String, residual: f64 },
    #[error("elements belong to different triple systems")]
    SystemMismatch,
    #[error("element is not a tripotent (residual {residual:.3e})")]
    NotTripotent { residual: f64 },
    #[error("singular value {value} is not within 1e-7 of 0 or 1")]
    AmbiguousRank { value: f64 },
    #[error("rank {requested} exceeds the rank {max} of the system")]
    RankUnachievable { requested: usize, max: usize },
    #[error("{0} has no unitary tripotents")]
    NoUnitaryExists(String),
    #[error("unitary completion failed (residual {residual:.3e})")]
    CompletionFailed { residual: f64 },
    #[error("tripotent is not unitary")]
    NotUnitary,
    #[error("square root leaves the subtriple (residual {residual:.3e})")]
    RootOutsideSystem { residual: f64 },
    #[error("operation not supported for {0}")]
    UnsupportedFamily(String),
    #[error("u is not in the Peirce 2-space of e (residual {residual:.3e})")]
    NotLe2 { residual: f64 },
    #[error("hull invariant obstructs the chain: {0}")]
    InvariantObstruction(String),
    #[error("link {index} failed verification (residual {residual:.3e})")]
    LinkVerificationFailed { index: usize, residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Solver stalls, as opposed to bad input or a mathematical negative.
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::Linalg(LinalgError::NoConvergence))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
