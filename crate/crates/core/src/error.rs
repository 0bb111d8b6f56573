use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("term z^{l} u^{i} is not holomorphic on the V chart (needs l <= i)")]
    NotVHolomorphic { l: i64, i: u32 },
    #[error("determinant is not a unit: its u = 0 part is not a monomial c*z^k with c != 0")]
    NonUnitDeterminant,
    #[error("determinant restricted to u = 0 is not a nonzero constant")]
    NonConstantDeterminant,
    #[error("polynomial has terms on the exceptional divisor (u-degree 0)")]
    HasDivisorLevelTerms,
    #[error("truncation order {trunc} is below 2j-2 = {required}")]
    TruncationTooLow { trunc: u32, required: u32 },
    #[error("index (i = {i}, l = {l}) is outside the canonical window for j = {j}")]
    OutsideWindow { j: u32, i: u32, l: i64 },
    #[error("requested order {order} exceeds the input truncation {trunc}")]
    OrderTooLarge { order: u32, trunc: u32 },
    #[error("witness degree bound exhausted: {0}")]
    DegreeBoundExceeded(String),
    #[error("splitting types differ ({0} vs {1})")]
    SplittingTypeMismatch(u32, u32),
    #[error("unsupported subset description: {0}")]
    UnsupportedSubsetDescription(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
