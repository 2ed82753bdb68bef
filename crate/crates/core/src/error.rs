use thiserror::Error;

use crate::complexzeros::Rectangle;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    /// The requested evaluation would leave the floating-point exponent range.
    #[error("overflow risk evaluating degree {n} polynomial at sigma = {sigma}")]
    OverflowRisk { n: u64, sigma: f64 },

    #[error("sign at sigma = {sigma} undetermined up to {precision_bits} bits")]
    PrecisionExhausted { sigma: f64, precision_bits: u32 },

    #[error("boundary of {rect:?} passes too close to a zero")]
    BoundaryTooClose { rect: Rectangle },

    #[error("winding number of {rect:?} is inconsistent ({detail})")]
    WindingInconsistent { rect: Rectangle, detail: String },

    #[error("no completely multiplicative witness for n = {n}, k = {k}")]
    NoWitness { n: u64, k: u64 },

    #[error("{primes} primes in the window exceed the brute-force cap of {cap}")]
    CapExceeded { primes: usize, cap: usize },

    #[error("on-curve identity failed: {0}")]
    IdentityViolation(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
