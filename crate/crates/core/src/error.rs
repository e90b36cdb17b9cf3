// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(String),
    #[error("invalid form {0}: {1}")]
    InvalidForm(String, &'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("value out of supported range: {0}")]
    OutOfRange(String),
    #[error("could not completely factor {0} within the effort budget")]
    FactorizationIncomplete(u64),
    #[error("ideal is not proper")]
    NotProper,
    #[error("ideal is not integral")]
    NotIntegral,
    #[error("ideals live in different orders")]
    ContextMismatch,
    #[error("orders are not nested: D={small}, D'={large}")]
    NotNested { small: i64, large: i64 },
    #[error("prime {0} divides the conductor")]
    ConductorPrime(u64),
    #[error("prime {0} does not divide the conductor")]
    NotConductorPrime(u64),
    #[error("prime {0} is inert")]
    InertPrime(u64),
    #[error("norm {0} is not coprime to the conductor")]
    NotCoprime(String),
    #[error("inert prime {0} occurs with odd exponent")]
    OddInertExponent(u64),
    #[error("no representative with norm coprime to {0} found in the search box")]
    RepresentativeSearchExhausted(u64),
    #[error("unknown example id {0:?}")]
    UnknownExample(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
