use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid sl2-triple: {0}")]
    InvalidTriple(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("isotropic subspace: {0}")]
    NotIsotropic(String),
    #[error("condition on a violated: {0}")]
    ConditionOnA(String),
    #[error("degenerate bilinear form: {0}")]
    DegenerateForm(String),
    #[error("setup invariant violated: {0}")]
    SetupInvariant(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("no finite-order inverse: {0}")]
    NoFiniteOrderInverse(String),
    #[error("recursion cap exceeded: {0}")]
    CapExceeded(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("unknown example {name:?}; available: {available}")]
    UnknownExample { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;
