use alloc::vec::Vec;

/// Errors raised by the models in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("`{param}` out of domain: {reason}")]
    Domain {
        param: &'static str,
        reason: &'static str,
    },
    /// Inputs are individually valid but mutually inconsistent.
    #[error("inconsistent inputs: {0}")]
    Inconsistent(&'static str),
    /// The data cannot determine the fit parameters.
    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),
    /// The nonlinear solver ran out of iterations.
    #[error("fit did not converge after {iterations} iterations (cost {cost:e})")]
    NoConvergence {
        iterations: usize,
        cost: f64,
        /// Best parameter vector found, in the model's natural units.
        best: Vec<f64>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain<T>(param: &'static str, reason: &'static str) -> Result<T> {
    Err(Error::Domain { param, reason })
}

/// Non-fatal conditions attached to an otherwise valid result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Warning {
    /// A passive chain shows net gain.
    GainInPassiveChain,
    /// A detector reading lies above its square-law range.
    DetectorSaturated,
}
