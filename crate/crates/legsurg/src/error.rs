//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Variants fall into two families: *schema* errors (the input does not
/// describe a valid object) and *computation* errors (a valid object does not
/// satisfy the precondition of an operation).  [`Error::is_schema`] tells them
/// apart, which the command-line front end maps to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A front event refers to a strand that does not exist, or the strand
    /// count does not return to zero.
    #[error("strand count mismatch at event {event}: {detail}")]
    StrandCountMismatch { event: usize, detail: String },
    /// The strands of a front do not close up into a link.
    #[error("front has unmatched strand ends")]
    OpenEnds,
    /// A contact surgery coefficient is zero.
    #[error("component {component} has contact coefficient 0")]
    ZeroCoefficient { component: usize },
    /// Two components do not form a cancelling pair.
    #[error("components {0} and {1} do not cancel: {2}")]
    NotCancellable(usize, usize, String),
    /// A handle slide was requested over a component whose coefficient is not `±1/n`.
    #[error("component {0} has coefficient {1}, expected ±1/n")]
    BadCoefficient(usize, String),
    /// A Rolfsen twist was requested on a component that is not a
    /// `tb = -1` unknot with coefficient `1 + 1/n`.
    #[error("component {0} is not a tb -1 unknot with coefficient 1 + 1/n: {1}")]
    NotUnknotSlot(usize, String),
    /// RGB data violates the meridian conditions.
    #[error("not an RGB configuration: {0}")]
    NotRgb(String),
    /// A polynomial computation exceeded the crossing guard.
    #[error("diagram with {crossings} crossings exceeds the limit of {limit}")]
    TooLarge { crossings: usize, limit: usize },
    /// A knot class without a classification table.
    #[error("unknown knot class {0:?}")]
    UnknownClass(String),
    /// An index refers to a component that does not exist.
    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },
    /// Malformed input data (JSON shape, rational syntax, PD code consistency).
    #[error("schema error: {0}")]
    Schema(String),
    /// Any other failed precondition inside a computation.
    #[error("computation error: {0}")]
    Computation(String),
}

impl Error {
    /// `true` for errors caused by malformed input rather than by a failed
    /// precondition of a well-formed computation.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::StrandCountMismatch { .. } | Error::OpenEnds | Error::Schema(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

/// Checks `index < len`.
pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, len })
    }
}
