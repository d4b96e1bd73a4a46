use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {rows}x{cols} (expected 2x2 or 4x4)")]
    Dimension { rows: usize, cols: usize },

    #[error("matrix is not symplectic: residual {residual:.3e} exceeds {tol:.1e}")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("path endpoints do not match: gap {gap:.3e}")]
    EndpointMismatch { gap: f64 },

    #[error("path does not start at the identity: deviation {deviation:.3e}")]
    NonIdentityStart { deviation: f64 },

    #[error("malformed path file: {0}")]
    MalformedCsv(String),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("crossing-form pivot d(t*) = {value:.3e} is too close to zero")]
    DNearZero { value: f64 },

    #[error("perturbation epsilon = {epsilon:.1e} puts a junction on the singular set")]
    EpsilonTooLarge { epsilon: f64 },

    #[error("non-transverse intersection at t = {t}")]
    Nontransverse { t: f64 },

    #[error("eccentricity {ecc} is not elliptic")]
    ParabolicOrHyperbolic { ecc: f64 },

    #[error("collision orbit (zero angular momentum)")]
    Collision,

    #[error("Newton iteration did not converge in {0} steps")]
    MaxIter(usize),

    #[error("integration not converged after {doublings} doublings (last change {change:.3e})")]
    NonConverged { doublings: usize, change: f64 },

    #[error("curve passes within {distance:.3e} of the origin")]
    NearOrigin { distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable upper-case tag for the variant, for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "UNSUPPORTED_DIMENSION",
            Error::NotSymplectic { .. } => "NOT_SYMPLECTIC",
            Error::EndpointMismatch { .. } => "ENDPOINT_MISMATCH",
            Error::NonIdentityStart { .. } => "NON_IDENTITY_START",
            Error::MalformedCsv(_) => "MALFORMED_CSV",
            Error::Domain(_) => "DOMAIN",
            Error::DNearZero { .. } => "D_NEAR_ZERO",
            Error::EpsilonTooLarge { .. } => "EPSILON_TOO_LARGE",
            Error::Nontransverse { .. } => "NONTRANSVERSE",
            Error::ParabolicOrHyperbolic { .. } => "PARABOLIC_OR_HYPERBOLIC",
            Error::Collision => "COLLISION",
            Error::MaxIter(_) => "MAX_ITER",
            Error::NonConverged { .. } => "NONCONVERGED",
            Error::NearOrigin { .. } => "NEAR_ORIGIN",
        }
    }
}
