use thiserror::Error;

/// Errors raised by the factorization library.
///
/// Certificates never use this type for clause failures; a failed clause is
/// data. Errors here mean a precondition was violated or a search ran out of
/// room.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("norm bound violated: norm {norm} exceeds declared bound {bound}")]
    NormBoundViolated { norm: String, bound: String },

    #[error("divergent majorant: {0}")]
    DivergentMajorant(String),

    #[error("instance mismatch: {left} vs {right}")]
    InstanceMismatch { left: String, right: String },

    #[error("zero value at site {site}")]
    ZeroValue { site: String },

    #[error("singular element: {0}")]
    Singular(String),

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("search exhausted at cap {cap} (stage: {stage}, best margin {best_margin})")]
    Exhausted {
        stage: String,
        cap: usize,
        best_margin: String,
    },

    #[error("illegal path: {0}")]
    IllegalPath(String),

    #[error("schedule overflow: {0}")]
    ScheduleOverflow(String),

    #[error("decay too slow: {0}")]
    DecayTooSlow(String),

    #[error("element is not in S: violation at site {site}")]
    NotInS { site: i64 },

    #[error("element support reaches site {site}, outside the represented window [-{window}, {window}]")]
    OutsideWindow { site: i64, window: i64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
