use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("surface of type (g={genus}, n={punctures}) is not hyperbolic: 2g-2+n must be positive")]
    NonHyperbolic { genus: u64, punctures: u64 },

    #[error("systole {0} out of range: must satisfy 0 < l <= 2*arcsinh(1)")]
    SystoleOutOfRange(f64),

    #[error("epsilon {0} out of range: must satisfy 0 < eps <= arcsinh(1)")]
    EpsilonOutOfRange(f64),

    #[error("kappa=0: contraction constant undefined for the thrice-punctured sphere")]
    KappaZero,

    #[error("parameter t={0} out of range: must be finite and >= 1")]
    InvalidT(f64),

    #[error("invalid argument {name}={value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("offset s={offset} exceeds collar half-width w={half_width}")]
    OffsetExceedsWidth { offset: f64, half_width: f64 },

    #[error("non-finite input {0}")]
    NonFinite(f64),

    #[error("no interior maximum found by the bracketing scan on (0, {upper}]")]
    NoInteriorMaximum { upper: f64 },

    #[error("value not representable as a double: {0}")]
    NotRepresentable(String),

    #[error("radius regime violated: r*={r_star} >= c2/(|chi| t)={limit}")]
    RegimeViolation { r_star: f64, limit: f64 },

    #[error("inequality {claim} violated at {point}: residual {residual}")]
    InequalityViolated {
        claim: &'static str,
        point: f64,
        residual: f64,
    },

    #[error("cannot parse tower value {0:?}")]
    Parse(String),

    #[error("t grid must be nonempty, contain 1, and lie in [1, inf)")]
    InvalidGrid,

    /// `index` is the one-based position in the boundary list.
    #[error("boundary component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("boundary component list is empty")]
    EmptyBoundary,
}

pub(crate) fn require_finite(x: f64) -> crate::Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(x))
    }
}
