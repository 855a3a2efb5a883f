use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed input (non-finite numbers, empty lists, bad parameters).
    #[error("invalid input: {0}")]
    Input(String),
    /// A point or set outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Relaxation hit its sweep cap.
    #[error("relaxation did not converge after {sweeps} sweeps (last update {residual:e})")]
    SolverNonConvergence { sweeps: usize, residual: f64 },
    /// The N schedule of the Carleman operator ran out before two
    /// consecutive values agreed.
    #[error("Carleman limit did not settle; consecutive gaps {gaps:?}")]
    CarlemanNonConvergence { gaps: Vec<f64> },
    /// An evaluation point sits on a quadrature node.
    #[error("quadrature error: {0}")]
    Quadrature(String),
    /// The region is not simply connected, or otherwise has the wrong shape.
    #[error("topology error: {0}")]
    Topology(String),
    /// A Stolz ray left the region before the requested depth.
    #[error("not an end-point: {0}")]
    NotEndPoint(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
