use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A fixed time step exceeds the CFL bound of the explicit scheme.
    #[error("CFL violation: h = {h:.6e} exceeds the stability limit {limit:.6e} (N = {steps}, N_min = {min_steps})")]
    Stability {
        h: f64,
        limit: f64,
        steps: usize,
        min_steps: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
