use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ambient dimension must be between 1 and {max}, got {found}")]
    AmbientOutOfRange { found: usize, max: usize },
    #[error("index {index} outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("index sequence is not strictly increasing")]
    UnsortedIndices,
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("the tensor is zero")]
    ZeroTensor,
    #[error("the tensor is not decomposable")]
    NotDecomposable,
    #[error("not a secant point: {0}")]
    NotSecant(String),
    #[error("secant split failed: {0}")]
    SplitFailed(String),
    #[error("the secant factors are conjugate over Q(sqrt({discriminant})), no rational pair exists")]
    ConjugateFactors { discriminant: String },
    #[error("not a tangent point: {0}")]
    NotTangent(String),
    #[error("wrong stratum: expected {expected}, found {found}")]
    WrongStratum { expected: String, found: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
