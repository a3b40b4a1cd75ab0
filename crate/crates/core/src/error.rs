use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value for `{0}`")]
    NonFinite(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("singular susceptibility denominator: {0}")]
    Singular(String),

    #[error(
        "ensemble quadrature did not converge: worst panel [{lo:.6e}, {hi:.6e}] rad/s, residual {residual:.3e}"
    )]
    Quadrature { lo: f64, hi: f64, residual: f64 },

    #[error("finite-difference derivative unstable (relative disagreement {0:.3e})")]
    Derivative(f64),

    #[error("propagation failed at z = {z:.6e} m: {reason}")]
    Propagation { z: f64, reason: String },

    #[error("unknown scenario `{id}` (available: {available})")]
    UnknownScenario { id: String, available: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
