//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by constructors and conversions.
///
/// Validation of axioms never produces an `Error`; it produces a
/// [`crate::report::Report`]. Errors are reserved for malformed input,
/// violated preconditions, and internal consistency traps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A Dynkin component with an impossible type/rank combination.
    #[error("invalid Dynkin component {letter}{rank}: {reason}")]
    InvalidDiagram {
        letter: char,
        rank: usize,
        reason: String,
    },
    /// A diagram string that could not be parsed.
    #[error("cannot parse Dynkin type `{0}`")]
    DiagramSyntax(String),
    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A simple-root index outside `0..rank`.
    #[error("simple root index {0} out of range")]
    NodeOutOfRange(usize),
    /// A vector that was required to be a positive root is not one.
    #[error("{0:?} is not a positive root")]
    NotARoot(Vec<i64>),
    /// Mixed-sign coefficients where a nonnegative combination was required.
    #[error("{0:?} has coefficients of mixed sign")]
    MixedSigns(Vec<i64>),
    /// An element that was required to be a spherical root of the group is not one.
    #[error("{0} is not a spherical root of the group")]
    NotASphericalRoot(String),
    /// A lattice vector outside the lattice it must belong to.
    #[error("vector {0:?} does not lie in the required lattice")]
    NotInLattice(Vec<String>),
    /// A precondition on the input object failed (e.g. it does not validate).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The requested rank exceeds the configured enumeration guard.
    #[error("rank {rank} exceeds the enumeration bound {bound}")]
    RankBound { rank: usize, bound: usize },
    /// A consistency check that should be unreachable on valid input failed.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;
