use faer::linalg::evd::EvdError;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("system too small: {got} sites given, at least {min} required")]
    Dimension { got: usize, min: usize },

    #[error("coupling profile has {got} entries but the chain has {expected} bonds")]
    ProfileLength { expected: usize, got: usize },

    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("cos eps = {value} lies outside [-1, 1]")]
    Domain { value: f64 },

    #[error(
        "point is too close to a phase boundary: half-gap at 0 is {gap_zero:.3e}, \
         at pi is {gap_pi:.3e}"
    )]
    Gapless { gap_zero: f64, gap_pi: f64 },

    #[error("unpaired boundary modes: {n_zero} zero modes and {n_pi} pi modes")]
    UnpairedModes { n_zero: usize, n_pi: usize },

    #[error("theta0 = {theta0} is not on the theta0 = pi/4 line")]
    NotOnLine { theta0: f64 },

    #[error("N = {n} must be divisible by 4 for the momentum grids to line up")]
    NotMultipleOfFour { n: usize },

    #[error("energy {value} lies outside the arcsin domain [-1, 1]")]
    AsinDomain { value: f64 },

    #[error("spectra have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("eta = {eta} is outside the open interval (0, pi/4)")]
    EtaRange { eta: f64 },

    #[error("localization-length fit failed: {0}")]
    Fit(String),

    #[error("too few points for a power-law fit: {got} given, at least {min} required")]
    TooFewPoints { got: usize, min: usize },

    #[error("power-law fit needs positive data, got {value:e} at N = {size}")]
    NonPositive { size: usize, value: f64 },

    #[error("eigensolver did not converge: {0}")]
    Eigen(String),
}

impl Error {
    /// True for failures that arise while computing rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotUnitary { .. }
                | Error::Domain { .. }
                | Error::AsinDomain { .. }
                | Error::Fit(_)
                | Error::NonPositive { .. }
                | Error::UnpairedModes { .. }
                | Error::Eigen(_)
        )
    }
}

impl From<EvdError> for Error {
    fn from(err: EvdError) -> Self {
        Error::Eigen(format!("{err:?}"))
    }
}
