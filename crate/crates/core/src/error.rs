use thiserror::Error;

use crate::geometry::COORD_BOUND;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A coordinate lies outside `[-COORD_BOUND, COORD_BOUND]`.
    #[error("coordinate {value} is outside the supported range ±{}", COORD_BOUND)]
    CoordinateBound { value: i128 },

    /// Malformed arguments (empty polygon, bad index subset, bad parameters).
    #[error("invalid input: {0}")]
    Input(String),

    /// The operation requires a property the input does not have.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A randomized procedure ran out of attempts.
    #[error("gave up after {attempts} attempts: {what}")]
    Exhausted { attempts: u32, what: String },

    /// The request exceeds an enumeration budget or a size cap.
    #[error("capability exceeded: {0}")]
    Capability(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
