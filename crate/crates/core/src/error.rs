use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UdwError {
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("gamma: pole at x = {0}")]
    Pole(f64),

    #[error(
        "quadrature did not converge after {panels} panels \
         (best estimate {value:e}, error estimate {error:e})"
    )]
    NonConvergence { value: f64, error: f64, panels: usize },

    #[error("invalid parameter: {0}")]
    InvalidSpec(String),

    #[error("{what} = {scale:e} must exceed the infrared cutoff {cutoff:e}")]
    IrCutoff {
        what: &'static str,
        scale: f64,
        cutoff: f64,
    },

    #[error("mode sum truncation insufficient: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, UdwError>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> UdwError {
    UdwError::Domain {
        function,
        detail: detail.into(),
    }
}

pub(crate) fn invalid(detail: impl Into<String>) -> UdwError {
    UdwError::InvalidSpec(detail.into())
}
