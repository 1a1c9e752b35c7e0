use thiserror::Error;

/// Errors raised by the arithmetic, geometry and experiment layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An enumeration or table would exceed its configured size cap.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Point counts that do not come from any variety.
    #[error("inconsistent point-count table: {0}")]
    InconsistentTable(String),

    /// Coefficient ring and coordinate ring are not compatible.
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    /// The point does not lie on the scheme.
    #[error("point not on scheme: {0}")]
    NotOnScheme(String),

    /// The fiber is singular at the point, which is outside the supported range.
    #[error("fiber singular at point: {0}")]
    SingularFiber(String),

    /// Closed points passed to a jet map are not pairwise distinct.
    #[error("points not distinct: {0}")]
    NotDistinct(String),

    /// A self-check inside an experiment failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
