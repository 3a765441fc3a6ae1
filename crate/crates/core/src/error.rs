use thiserror::Error;

use crate::cf::HelperId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("{what} must be {requirement}, got {value}")]
    Domain {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("helper {id} is undefined at r = {r}")]
    HelperDomain { id: HelperId, r: f64 },

    /// A central stencil would straddle a breakpoint.
    #[error("r = {r} lies within {band} of breakpoint {breakpoint}; request a one-sided stencil")]
    NearBreakpoint { r: f64, breakpoint: f64, band: f64 },

    #[error("no analytic correlation function for {0}")]
    NoAnalyticCf(&'static str),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("quadrature produced a negative intensity {value} at q = {q}")]
    NegativeIntensity { q: f64, value: f64 },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}
