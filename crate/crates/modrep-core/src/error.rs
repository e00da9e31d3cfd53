use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree {0} outside the supported range 1..=4")]
    DegreeOutOfRange(u32),
    #[error("field of order {0} is too large")]
    FieldTooLarge(u64),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(&'static str),
    #[error("element is not in {0}")]
    NotInSubgroup(&'static str),
    #[error("character exponent {0} out of range")]
    InvalidExponent(u32),
    #[error("J must be a subset of J0(chi)")]
    IllegalJ,
    #[error("symmetric-power digit out of range")]
    DigitOutOfRange,
    #[error("zero module")]
    ZeroModule,
    #[error("representation is reducible")]
    Reducible,
    #[error("support radius {radius} exceeds the limit {limit}")]
    RadiusExceeded { radius: u32, limit: u32 },
    #[error("level {level} exceeds the cap {cap}")]
    LevelCap { level: u32, cap: u32 },
    #[error("assignment is not K0-equivariant")]
    NotEquivariant,
    #[error("search radius {given} too small, need {needed}")]
    RadiusTooSmall { needed: u32, given: u32 },
    #[error("vector is not I(1)-fixed in the expected form: {0}")]
    NotFixed(&'static str),
    #[error("local system of the quotient solver is not injective")]
    NonInjective,
}

pub type Result<T> = std::result::Result<T, Error>;
