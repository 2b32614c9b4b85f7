use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-finite input")]
    NonFinite,
    #[error("overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("{name} = {value} is outside (0, 1/2]")]
    RadiusOutOfRange { name: &'static str, value: String },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("declared degree {declared} does not match structural degree {computed}")]
    DegreeMismatch { declared: u32, computed: u32 },
    #[error("invalid expression: {0}")]
    InvalidExpr(String),
    #[error("empty window [{lo}, {hi}]")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("window [{lo}, {hi}] is too short: need at least {need} points")]
    WindowTooShort { lo: i64, hi: i64, need: u64 },
    #[error("members must be strictly increasing and inside the window")]
    BadMembers,
    #[error("sequence of length {len} exceeds the enumeration cap {max}")]
    TooLong { len: usize, max: usize },
    #[error("sequence is not lacunary at position {0}")]
    NotLacunary(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("margin {margin} too small for recurrence order {order}")]
    MarginTooSmall { margin: u64, order: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
