use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("indeterminate arithmetic: {0}")]
    Indeterminate(&'static str),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("points must have dimension 1 or 2, got {0}")]
    Dimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("enclosure bounds inverted: [{0}, {1}]")]
    InvertedEnclosure(String, String),
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("{name} takes {expected} argument(s), got {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("piecewise guards overlap")]
    GuardOverlap,
    #[error("piecewise guard is empty")]
    EmptyGuard,
}

/// Parse failure with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn syntax(offset: usize, msg: impl Into<String>) -> Self {
        ParseError { offset, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("point {0} is outside the domain")]
    DomainViolation(String),
    #[error("division by zero at the sample point")]
    DivisionByZero,
    #[error("exact zero test impossible: divisor enclosure {0} straddles 0")]
    Straddle(String),
    #[error("rationality of an intermediate value is unknown")]
    RationalityUnknown,
    #[error("exponent variable needs an integer value")]
    NonIntegerExponent,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Library-level error; the CLI maps parse errors to exit code 2 and
/// everything else to 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Input(_)) || matches!(self, Error::Exact(ExactError::Parse(_)))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
