use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("prime p = {0} must be greater than 3")]
    PrimeTooSmall(u64),
    #[error("{q} does not divide N - 1 = {n_minus_one}")]
    NotDivisor { q: u64, n_minus_one: u64 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not distinguished")]
    NotDistinguished,
    #[error("level N = {0} has genus 0; the cuspidal space is trivial")]
    LevelTooSmall(u64),
    #[error("no good prime below {bound} for (N, p) = ({n}, {p})")]
    NoGoodPrime { n: u64, p: u64, bound: u64 },
    #[error("{ell} is not a good prime for (N, p) = ({n}, {p})")]
    NotGoodPrime { ell: u64, n: u64, p: u64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("modular symbol quotient is not free over Z/p^M: {0}")]
    NonFreeQuotient(String),
    #[error("consistency check failed: {0}")]
    Mismatch(String),
    #[error("invalid coefficient module: {0}")]
    InvalidModule(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
