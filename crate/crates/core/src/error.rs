use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("ground sets differ ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("block of size {size} is not divisible by {k}")]
    NotDivisible { size: usize, k: usize },
    #[error("not a member: {0}")]
    NotMember(String),
    #[error("cardinality mismatch: |L| = {l}, |R| = {r}")]
    Cardinality { l: usize, r: usize },
    #[error("element {0} out of range 1..={1}")]
    OutOfRange(i64, usize),
    #[error("parenthesization outside the admissible set: {0}")]
    NotAdmissible(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("scale guard: {0}")]
    ScaleGuard(String),
    #[error("invalid parameter: {0}")]
    Param(String),
}

pub type Result<T> = std::result::Result<T, Error>;
