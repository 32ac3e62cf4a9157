use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("order p must be positive")]
    ZeroOrder,
    #[error("surgery denominator must be positive")]
    ZeroDenom,
    #[error("gcd({a}, {b}) = {g}; arguments must be coprime")]
    NotCoprime { a: u64, b: i64, g: u64 },
    #[error("spin^c label {label} out of range [0, {order})")]
    LabelOutOfRange { label: u64, order: u64 },
    #[error("invalid V-sequence: {0}")]
    InvalidVSequence(#[from] VSeqViolation),
    #[error("torus knot parameters ({m}, {n}) must be coprime and >= 2")]
    BadTorusKnot { m: u64, n: u64 },
    #[error("polynomial does not evaluate to 1 at t = 1 (got {0})")]
    NotNormalized(i64),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// First violated condition of the V-sequence constraints
/// `V_i >= 0`, `V_i - V_{i+1} in {0, 1}`, trailing value `0`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VSeqViolation {
    #[error("negative value {value} at index {index}")]
    Negative { index: usize, value: i64 },
    #[error("step from {from} to {to} at index {index} is not 0 or 1")]
    BadStep { index: usize, from: i64, to: i64 },
    #[error("sequence does not end at 0 (last value {last})")]
    NonzeroTail { last: i64 },
}
