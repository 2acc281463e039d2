use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("trinomial parts {a} + {b} + {c} do not sum to {n}")]
    TrinomialParts { n: u64, a: u64, b: u64, c: u64 },

    #[error("index set must be strictly increasing and positive, got {0:?}")]
    BadIndexSet(Vec<usize>),

    #[error("vanishing denominator X[{row}] + Y[{col}] = 0")]
    ZeroSum { row: usize, col: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("vanishing denominator for permutation {perm:?} at prefix length {prefix}")]
    VanishingPrefix { perm: Vec<usize>, prefix: usize },

    #[error("vanishing factor {what} at positions ({j}, {k})")]
    VanishingPair {
        what: &'static str,
        j: usize,
        k: usize,
    },

    #[error("coordinate {index} is zero")]
    ZeroCoordinate { index: usize },

    #[error("size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("set {0:?} does not have the odd/even counts required by the oe-order")]
    OeCounts(Vec<usize>),

    #[error("invalid signature d = {d}, s = {s}: need d >= 1 and 2s <= d")]
    InvalidSignature { d: usize, s: usize },

    #[error("method `{method}` requires even degree, got d = {d}")]
    NeedsEvenDegree { method: &'static str, d: usize },

    #[error(
        "odd-degree determinant sum for d = {d} = 2n-1 only covers s <= n-1 = {max}, got s = {s}"
    )]
    OddDegreeRange { d: usize, s: usize, max: usize },

    #[error("method `{method}` only applies to s = 1, got s = {s}")]
    NeedsOnePair { method: &'static str, s: usize },

    #[error("method `{method}` only applies to d = 2s, got d = {d}, s = {s}")]
    NeedsTotallyComplex {
        method: &'static str,
        d: usize,
        s: usize,
    },

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}
