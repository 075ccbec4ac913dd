use thiserror::Error;

use crate::algebra::Var;

/// Errors raised by the algebra kernel and the suites built on it.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field parameter out of range: {0}")]
    BadFieldParam(String),
    #[error("field size {size} exceeds the configured cap {cap}")]
    SizeCapExceeded { size: u128, cap: u64 },
    #[error("elements belong to different field contexts")]
    CtxMismatch,
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("element code {0} out of range for this field")]
    BadElementCode(u64),
    #[error("bad coefficient shape: {0}")]
    BadCoefficients(String),
    #[error("{r} does not divide the multiplicative group order {order}")]
    RootOrderNotDivisor { r: u64, order: u64 },
    #[error("q = {given} does not match the field context (q = {expected})")]
    QMismatch { given: u64, expected: u64 },
    #[error("evaluation point does not supply variable {0}")]
    MissingCoordinate(Var),
    #[error("variable {0} does not occur in the divisor")]
    VarAbsentFromDivisor(Var),
    #[error("denominator factor is not in the declared multiplicative set: {0}")]
    UndeclaredDenominator(String),
    #[error("exponent {exp} of {var} is not reducible to a multiple of q-1 = {r}")]
    NonReducibleExponent { var: Var, exp: u32, r: u32 },
    #[error("unsupported tower model: {0}")]
    UnsupportedModel(String),
    #[error("identity {id} requires index n >= {min}, got {got}")]
    IndexTooSmall { id: String, min: u32, got: u32 },
    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),
    #[error("identity {id} mentions level {needed} but points are enumerated at level {level}")]
    LevelTooLow { id: String, needed: u32, level: u32 },
    #[error("point cap of {cap} points exceeded during enumeration")]
    PointCapExceeded { cap: u64 },
    #[error("cannot extend a point whose top a-coordinate is zero")]
    DegenerateExtension,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
