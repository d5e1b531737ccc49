use thiserror::Error;

/// Errors produced by the bound computations.
///
/// All operations are total on their stated domains; outside them they
/// return a quiet `Domain` error rather than propagating NaNs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input lies outside the domain on which the closed forms are valid.
    #[error("domain error in `{op}`: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A requested value lies above the maximum of the packing function,
    /// or an envelope would cross z1 where the differential inequalities
    /// stop holding. `t_max` is the last parameter value (t = alpha^2)
    /// at which the bound is still certified, when known.
    #[error("hump exceeded: {detail} (t_max = {t_max:?})")]
    HumpExceeded { detail: String, t_max: Option<f64> },

    /// A root-finder or quadrature failed to converge to tolerance.
    #[error("numerical failure in `{op}`: {detail}")]
    Numerical { op: &'static str, detail: String },
}

impl Error {
    pub fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
