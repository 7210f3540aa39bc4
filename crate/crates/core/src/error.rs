use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("determinant must be positive, got {0}")]
    NonPositiveDeterminant(f64),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("no common affine chart bounds both domains")]
    ChartMismatch,
    #[error("image is not properly convex in any chart")]
    NotProperlyConvex,
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("spectrum is not real and positive: {0}")]
    NotPositiveSpectrum(String),
    #[error("Newton iteration diverged: {0}")]
    NewtonDiverged(String),
    #[error("discrete convexity lost: {0}")]
    LostConvexity(String),
    #[error("grid too coarse: {0}")]
    TooCoarse(String),
    #[error("numerical gradients are not monotone: {0}")]
    GradientFold(String),
    #[error("radial path leaves the interior node set")]
    PathExits,
    #[error("bad flat window: {0}")]
    BadWindow(String),
    #[error("residue must be nonzero")]
    ZeroResidue,
    #[error("solution leaves the sub/super-solution bracket: {0}")]
    BracketViolated(String),
    #[error("cubic differential vanishes on the truncation circle")]
    ZeroOnBoundary,
    #[error("path leaves the data grid at z = {0}")]
    DataOffGrid(String),
    #[error("developed boundary is not convex: {0}")]
    NotConvex(String),
    #[error("data is not equivariant under the deck map: {0}")]
    NotEquivariant(String),
    #[error("conserved quantity drifted: {0}")]
    InvariantDrift(String),
    #[error("singular linear system")]
    Singular,
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Input errors (as opposed to numerical failures of a solver).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_)
                | Error::NonPositiveDeterminant(_)
                | Error::Overflow(_)
                | Error::ChartMismatch
                | Error::NotProperlyConvex
                | Error::DegenerateDomain(_)
                | Error::BadWindow(_)
                | Error::ZeroResidue
                | Error::ZeroOnBoundary
                | Error::PathExits
                | Error::TooCoarse(_)
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
