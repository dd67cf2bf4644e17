use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("transform is singular (det = 0)")]
    SingularTransform,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("the zero form has no roots or orders")]
    ZeroForm,
    #[error("invalid parameters: {0}")]
    ParameterError(String),
    #[error("root list contains a repeated root")]
    DuplicateRoots,
    #[error(
        "a 4-subset of the first root list is projectively equivalent to a 4-subset of the second"
    )]
    CrossRatioCollision,
    #[error("degenerate point triple: points must be pairwise distinct")]
    DegenerateTriple,
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("invalid solver configuration: {0}")]
    ConfigError(String),
    #[error("localization total is not constant: {0} != {1}")]
    NonConstantResult(String, String),
    #[error("evaluation point is a pole of the localization summands")]
    PoleAtEvaluation,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
