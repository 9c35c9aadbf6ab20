use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point-set generation failed: {0}")]
    Generation(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A moment or series diverged; `criterion` names the failing condition.
    #[error("divergent: {criterion}")]
    Divergent { criterion: String },

    #[error("section size {size} exceeds cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("point set is not separated (d_* = {0})")]
    NotSeparated(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn divergent(criterion: impl Into<String>) -> Self {
        Error::Divergent {
            criterion: criterion.into(),
        }
    }
}
