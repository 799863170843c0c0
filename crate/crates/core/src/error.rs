use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} out of range 1..={max}", max = crate::field::MAX_EXTENSION_DEGREE)]
    ExtensionDegree(u32),

    #[error("reduction polynomial {poly:#x} does not have degree {expected}")]
    WrongDegree { poly: u64, expected: u32 },

    #[error("reduction polynomial {0:#x} is reducible over GF(2)")]
    Reducible(u64),

    #[error("element {value:#x} does not belong to GF(2^{m})")]
    NotInField { value: u32, m: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("linearized polynomial is not separable (a_0 = 0)")]
    NotSeparable,

    #[error("coefficient a_0 must not be 0 or 1 so that both f and x - f are separable")]
    DegenerateLowCoefficient,

    #[error("splitting field too small: found {found} roots, expected {expected}")]
    SplittingFieldTooSmall { found: usize, expected: usize },

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("enumeration of {needed} messages exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("inconsistent received word: {0}")]
    Inconsistent(String),

    #[error("k = {0} is not a breakpoint dimension")]
    NotBreakpoint(usize),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}
