use thiserror::Error;

/// Errors shared by every module in this crate.
///
/// `Parse` carries a human-readable location ("byte 4" for graph6 strings,
/// "line 3" for edge lists) so callers can point at the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at {location}: {msg}")]
    Parse { location: String, msg: String },

    #[error("graph too large for exact subset search (n = {n}, guard = {guard}); use bounds or raise the guard")]
    Capacity { n: usize, guard: usize },

    #[error("Z-variant search requires k <= min degree (k = {k}, min degree = {delta}); enable allow_z_below_delta to search anyway")]
    ZBelowDelta { k: u32, delta: usize },

    #[error("closed form not applicable: {0}")]
    NotApplicable(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, msg: impl Into<String>) -> Error {
        Error::Parse {
            location: location.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
