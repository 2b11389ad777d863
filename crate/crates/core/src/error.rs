use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field of order {p}^{degree} exceeds the supported bound (p < 2^31, p^D <= 2^62)")]
    FieldTooLarge { p: u64, degree: u32 },

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{0} is not a positive power of the characteristic")]
    NotCharacteristicPower(u64),

    #[error("degree {sub} does not divide degree {sup}")]
    DegreeNotDividing { sub: u32, sup: u32 },

    #[error("element is not in the span of the given basis")]
    NotInSpan,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("budget exceeded: {needed} objects to enumerate, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("generator matrix does not have full row rank over the code field")]
    RankDeficient,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("code is degenerate: length {length} but its q-system has dimension {qsystem_dim} (compress it first)")]
    Degenerate { length: usize, qsystem_dim: usize },

    #[error("code is not antipodal two-weight: {0}")]
    NotAtw(String),

    #[error("internal inconsistency (contradicts a known theorem): {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
