use thiserror::Error;

use crate::scheme::BlockId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("weight `{name}` is not registered for block {block}")]
    MissingWeight { name: String, block: BlockId },

    #[error("not liftable at this truncation: {0}")]
    NotLiftable(String),

    #[error("undetermined: {0}")]
    Undetermined(String),

    #[error("pressure solve failed: no sign change found in [{lo}, {hi}]")]
    PressureSolveFailed { lo: f64, hi: f64 },

    #[error("truncated transfer matrix is reducible")]
    Reducible,

    #[error("normalization mass {0} differs from 1 beyond tolerance")]
    Normalization(f64),

    #[error("hypothesis failure: {0}")]
    Hypothesis(String),

    #[error("t = {t} lies outside the admissible interval ({lower}, {upper})")]
    OutsideInterval { t: f64, lower: f64, upper: f64 },

    #[error("not checkable: {0}")]
    NotCheckable(String),

    #[error("sampling refused: {0}")]
    NotSamplable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
