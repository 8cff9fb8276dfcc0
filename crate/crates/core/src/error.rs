use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible points: {0}")]
    IncompatiblePoints(String),

    #[error("empty set")]
    EmptySet,

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("hyperspace level {level} exceeds the configured cap {cap}")]
    LevelTooDeep { level: usize, cap: usize },

    #[error("invalid distance table: {0}")]
    InvalidTable(String),

    #[error("gauge value {value} at t = {at} lies outside [0, 1)")]
    CodomainViolation { at: String, value: String },

    #[error("negative argument {0}")]
    NegativeArgument(String),

    #[error("probe set is empty")]
    EmptyProbeSet,

    #[error("no probe lies strictly right of t0 = {0}")]
    NoProbesRightOfT0(String),

    #[error("pair ({0}, {1}) has zero distance")]
    ZeroDistancePair(String, String),

    #[error("no image point within the selection bound (D = {distance}, bound = {bound})")]
    BoundUnachievable { distance: String, bound: String },

    #[error("image point {0} escapes the declared space")]
    DomainEscape(String),

    #[error("point {0} is not in the domain of the map")]
    NotInDomain(String),

    #[error("numeric mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
