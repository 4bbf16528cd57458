use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate coupling expansion: sigma vanishes (R_m = 1 at a node or antinode)")]
    DegenerateExpansion,

    #[error("no physical mean-field root (n >= 0, off the softening pole)")]
    NoPhysicalRoot,

    #[error("branch {requested} requested but only {available} admissible roots exist")]
    BranchOutOfRange { requested: usize, available: usize },

    #[error("selected root lies within {relative_distance:.3e} (relative) of the softening pole")]
    NearSingularSoftening { relative_distance: f64 },

    #[error("drift matrix is not Hurwitz (max Re = {margin:.6e} rad/s); no steady state")]
    NoSteadyState { margin: f64 },

    #[error(
        "stability cross-check failed: Routh-Hurwitz says stable={routh_hurwitz}, \
         eigenvalues give max Re = {margin:.6e}"
    )]
    StabilityDisagreement { routh_hurwitz: bool, margin: f64 },

    #[error("singular linear system in Lyapunov solve")]
    SingularLyapunov,

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Errors that indicate a numerical self-check failed, as opposed to a
    /// physically meaningful outcome (instability, missing root).
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::StabilityDisagreement { .. })
    }
}
