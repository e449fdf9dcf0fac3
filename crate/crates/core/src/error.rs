//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by the layer that raises them; each carries enough
/// context to produce a useful one-line message for the command line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A modulus that must be prime is composite.
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    /// A coloring does not assign a color to some arc.
    #[error("coloring has no color for arc {0}")]
    MissingArc(usize),
    /// A nested continued fraction divides by zero.
    #[error("continued fraction divides by zero at depth {depth}")]
    DivisionByZero {
        /// One-based nesting depth of the offending denominator.
        depth: usize,
    },
    /// Enumeration would exceed the configured cap.
    #[error("enumeration of {count} colorings exceeds the cap of {cap}")]
    CapExceeded {
        /// Number of colorings that would be produced (saturating).
        count: u64,
        /// The configured cap.
        cap: u64,
    },
    /// The diagram has no nontrivial coloring modulo the requested prime.
    #[error("no nontrivial coloring modulo {0}")]
    NoNontrivialColoring(u64),
    /// The diagram is malformed or unsuitable for the operation.
    #[error("bad diagram: {0}")]
    BadDiagram(String),
    /// A move could not be applied at the requested location.
    #[error("move {index} ({text}) is not applicable: {reason}")]
    InapplicableMove {
        /// Zero-based position of the move in its script.
        index: usize,
        /// The move as written in the script.
        text: String,
        /// Why the move failed.
        reason: String,
    },
    /// A text file could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse {
        /// One-based line number.
        line: usize,
        /// Description of the problem.
        message: String,
    },
    /// A pipeline stage was requested out of order.
    #[error("stage error: {0}")]
    Stage(String),
    /// An internal consistency check failed (a bug, not a user error).
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: msg.into(),
    })
}
