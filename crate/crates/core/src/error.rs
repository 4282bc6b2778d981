use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("operands live in different rings: [{left}]_q vs [{right}]_q")]
    PrimeMismatch { left: u32, right: u32 },
    #[error("coefficient vector has length {len}, expected {expected}")]
    BadLength { len: usize, expected: usize },
    #[error("the q-integer [0] is empty")]
    EmptyQInteger,
    #[error("p = {p} is below the minimum {min} for this operation")]
    PrimeTooSmall { p: u32, min: u32 },
    #[error("p = {p} is not congruent to {expected} mod 4")]
    WrongResidueClass { p: u32, expected: u32 },
    #[error("exponent {exponent} is not in [1, {max}]")]
    ExponentOutOfRange { exponent: u64, max: u64 },
    #[error("{value} is divisible by p = {p}")]
    NotCoprime { p: u32, value: i64 },
    #[error("class number sum {sum} is not divisible by {denominator} for p = {p}")]
    NonIntegralClassNumber { p: u32, sum: i64, denominator: i64 },
    #[error("class number h = {h} must be odd and positive")]
    ClassNumberParity { h: u64 },
    #[error("unit power has norm +1 for p = {p}; the Chowla-type coefficients need norm -1")]
    PositiveNorm { p: u32 },
    #[error("no exponent h matched the unit relation for p = {p} before c exceeded {bound}")]
    ClassNumberSearchExhausted { p: u32, bound: String },
    #[error("numeric class number for p = {p} is {residue} away from an integer at {bits} bits")]
    ImpreciseNumeric { p: u32, residue: f64, bits: usize },
    #[error("invalid range: min {min} > max {max}")]
    InvalidRange { min: u64, max: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
