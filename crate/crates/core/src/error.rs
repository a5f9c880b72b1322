use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} outside its domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("accuracy {requested:e} not reached, best estimate {achieved:e}")]
    Accuracy { achieved: f64, requested: f64 },

    #[error("no sign change of {what} in [{lo}, {hi}]")]
    NoRoot {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("energy scan cannot separate neighbouring roots near E = {energy}")]
    ScanResolution { energy: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        what,
        detail: detail.into(),
    }
}
