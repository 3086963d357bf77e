use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {0} is outside 1..=256")]
    BadDegree(usize),
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u128 },
    #[error("work cap of {0} visited tuples exceeded")]
    WorkCap(usize),
    #[error("index {index} out of range for arity {arity}")]
    BraidIndex { index: usize, arity: usize },
    #[error("split level {k} must satisfy 1 < k < {r}")]
    BadLevel { k: usize, r: usize },
    #[error("element is not in the group")]
    NotInGroup,
    #[error("unknown class label {label:?}; known labels: {known}")]
    UnknownClass { label: String, known: String },
    #[error("ramification type is not in block order: {0}")]
    NotBlockOrdered(String),
    #[error("no regular normal elementary abelian subgroup of order {p}^{e}")]
    NotAffine { p: u64, e: u32 },
    #[error("catalog entry {name}: expected order {expected}, generators give {actual}")]
    OrderMismatch {
        name: String,
        expected: u128,
        actual: u128,
    },
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("tuple does not lie in any indexed node (node index is inconsistent)")]
    NodeNotFound,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
