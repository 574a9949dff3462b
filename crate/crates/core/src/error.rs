use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("algebra has no basis elements")]
    EmptyAlgebra,
    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("spectral splitting needs eigenvalues outside the exact backend; use the float backend")]
    NotExactlySplittable,
    #[error("{0} needs an irrational number; use the float backend")]
    NeedsIrrational(String),
    #[error("invalid hermitian module: {0}")]
    InvalidModule(String),
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("wrong algebra: {0}")]
    WrongAlgebra(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error("no solution found during {stage}")]
    NoSolution { stage: String },
    #[error("element is not in the group: {0}")]
    NotMember(String),
    #[error("gave up after {0} attempts")]
    RetriesExhausted(usize),
    #[error("search inconclusive after {0} starts")]
    BudgetExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn no_solution(stage: &str) -> Error {
    Error::NoSolution { stage: stage.to_string() }
}
