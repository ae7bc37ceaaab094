use thiserror::Error;

use crate::mask::SetMask;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground size {0} is outside 1..=63")]
    GroundSize(u32),
    #[error("ground size {n} exceeds the dense-table cap of {cap}")]
    DenseCap { n: u32, cap: u32 },
    #[error("set {mask} has an element outside [1, {n}]")]
    OutOfRange { mask: SetMask, n: u32 },
    #[error("duplicate set {0}")]
    Duplicate(SetMask),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("binomial C({n}, {k}) overflows 128 bits")]
    Overflow { n: u32, k: i64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
