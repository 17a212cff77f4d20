use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input that is not a domain issue (empty grids, bad schedules).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The phase-shift denominator vanishes: tan δ₀ has a pole at this momentum.
    #[error("resonance pole in tan(delta0) at k = {k}")]
    ResonancePole { k: f64 },

    /// A matching quantity is evaluated exactly on one of its poles.
    #[error("singular point at {location}: {what}")]
    SingularPoint { what: String, location: f64 },

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: error estimate {estimate:e} after {intervals} intervals")]
    QuadratureNonConvergence { estimate: f64, intervals: usize },

    /// An iterative method (root refinement, extrapolation) did not settle.
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    /// The exterior zero-energy wavefunction has no real node outside the well.
    #[error("no node outside the well: scattering length a = {a} with range b = {b}")]
    NoNode { a: f64, b: f64 },

    /// The requested target cannot be reached on the admissible branch.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// The construction exists only for a subset of dimensions.
    #[error("unsupported dimension d = {d}: {reason}")]
    UnsupportedDimension { d: u32, reason: String },

    /// A well that should bind has no bound state.
    #[error("missing bound state for b = {b}")]
    MissingBoundState { b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
