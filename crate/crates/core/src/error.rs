use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient matrix is singular or non-finite")]
    DegenerateTransform,

    #[error("the identity fixes every point of the sphere")]
    AllPointsFixed,

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("group has no circle pairings to check")]
    MissingPairings,

    #[error("word enumeration exceeded the budget of {budget} words")]
    EnumerationBudget { budget: usize },

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("no sample points supplied")]
    EmptyInput,

    #[error("point lies on the limit set of the Beltrami coefficient")]
    OnLimitSet,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("family index {0} is degenerate")]
    DegenerateIndex(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("arc {0} has no stabilizer")]
    MissingStabilizer(usize),

    #[error("invalid arc: {0}")]
    InvalidArc(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
