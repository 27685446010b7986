use thiserror::Error;

/// Errors raised by the jet algebra, the solvers and the simulators.
///
/// An obstructed inverse problem is *not* an error: it is one of the
/// outcomes of [`crate::inverse::invert_map`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible rotation: {0} vs {1}")]
    IncompatibleRotation(f64, f64),

    #[error("composition not elliptic in required form (rotation reduces to 0)")]
    CompositionNotElliptic,

    #[error("non-elliptic time slice: rotation {alpha}·{t} reduces to 0")]
    NonEllipticTimeSlice { alpha: f64, t: f64 },

    #[error("integration failure from z0 = ({re}, {im}): {reason}")]
    IntegrationFailure { re: f64, im: f64, reason: String },

    #[error("low-order root of unity: B1 undefined by this method")]
    LowOrderRoot,

    #[error("left perturbative regime (|z| > {threshold})")]
    LeftPerturbativeRegime { threshold: f64 },

    #[error("invalid jet: {0}")]
    InvalidJet(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI's structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IncompatibleRotation(..) => "incompatible_rotation",
            Error::CompositionNotElliptic => "composition_not_elliptic",
            Error::NonEllipticTimeSlice { .. } => "non_elliptic_time_slice",
            Error::IntegrationFailure { .. } => "integration_failure",
            Error::LowOrderRoot => "low_order_root",
            Error::LeftPerturbativeRegime { .. } => "left_perturbative_regime",
            Error::InvalidJet(_) => "invalid_jet",
            Error::Usage(_) => "usage",
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
