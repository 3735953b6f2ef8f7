use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input text did not conform to the spec grammar.
    Parse,
    /// Well-formed input that violates a mathematical precondition.
    Validation,
    /// A guaranteed invariant failed; always a bug in this crate.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: BigInt, m: BigInt },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigInt),
    #[error("bad argument: {0}")]
    BadArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid composition: {0}")]
    Validation(String),
    #[error("index range [{i}, {j}) is not within one period of length {n}")]
    BadRange { i: i64, j: i64, n: usize },
    #[error("composition is not two-type: multipliers {0:?} are not all in {{1, p}}")]
    NotTwoType(Vec<i64>),

    #[error("degenerate cycle: q^n equals the product of multipliers ({0})")]
    DegenerateCycle(BigInt),

    #[error("shift b = {b} must satisfy 0 < b < {n}")]
    BadB { b: i64, n: usize },
    #[error("alpha and beta must both be nonzero")]
    ZeroCoefficient,
    #[error("{divisor} does not divide {value}")]
    NotCertified { divisor: BigInt, value: BigInt },
    #[error("decomposition needs i + b < n (got i = {i}, b = {b}, n = {n})")]
    WraparoundUnsupported { i: i64, b: i64, n: usize },
    #[error("no shift b with 0 < b < n exists for n = 1")]
    NoValidB,

    #[error("denominator {den} shares a factor with base {base}")]
    BaseNotCoprime { den: BigInt, base: i64 },
    #[error("base must be at least 2, got {0}")]
    BadBase(i64),
    #[error("no repeated state within {0} digits")]
    NoPeriodWithinBound(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
