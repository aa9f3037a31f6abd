use thiserror::Error;

/// Errors raised while computing signatures or normalizing terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SigError {
    #[error("arithmetic overflow in monoid addition")]
    Overflow,
    #[error("zero denominator in rational")]
    ZeroDenominator,
}

/// Syntax errors with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// Errors from assembling a coalgebra table out of per-state terms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("state {state}: reference to out-of-range state {referenced} (state count {n})")]
    StateOutOfRange {
        state: u32,
        referenced: u32,
        n: u32,
    },
    #[error("state {state}: term does not match functor shape at {path}: {message}")]
    ShapeMismatch {
        state: u32,
        path: String,
        message: String,
    },
    #[error("state {state}: distribution does not sum to 1")]
    DistributionSum { state: u32 },
    #[error("state {state}: {source}")]
    Arithmetic {
        state: u32,
        #[source]
        source: SigError,
    },
}

/// Errors from reading one of the external file formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Syntax {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FormatError {
    pub fn malformed(line: usize, message: impl Into<String>) -> FormatError {
        FormatError::Malformed {
            line,
            message: message.into(),
        }
    }
}
