//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Evaluation of a negative power at a zero coordinate.
    #[error("coordinate {axis} is zero but the polynomial has a negative exponent there")]
    ZeroCoordinate { axis: usize },

    /// A fiber polynomial vanished identically.
    #[error("fiber polynomial is identically zero (axis {axis})")]
    DegenerateFiber { axis: usize },

    /// Root finding or Newton iteration failed to converge.
    #[error("no convergence after {iterations} iterations (best residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A requested coefficient cannot be reached within the caller's budget.
    #[error("truncation budget exhausted: {0}")]
    Truncation(String),

    /// A structurally invalid argument (dimension mismatch, non-vertex, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The probed point lies inside or too near the amoeba for root counts
    /// to stabilise.
    #[error("point inside or too near the amoeba: {0}")]
    NearAmoeba(String),

    /// A critical point at which the logarithmic Gauss map is not locally
    /// invertible (singular Jacobian / non-Morse phase).
    #[error("degenerate critical point: {0}")]
    DegenerateCriticalPoint(String),

    /// A point of the hypersurface where all logarithmic partials vanish.
    #[error("singular point of the hypersurface")]
    SingularPoint,

    /// Mean energy outside the closed convex hull of the spectrum.
    #[error("mean energy is not admissible (outside the closure of the spectrum hull)")]
    Inadmissible,

    /// Mean energy on the boundary of the hull: the minimising sequence
    /// escapes to infinity.
    #[error("mean energy on the hull boundary: iterate escaped (|x| = {norm:.3e})")]
    BoundaryDivergence { norm: f64 },

    /// No admissible occupation collections for the requested (N, E).
    #[error("empty ensemble: no admissible collections for the requested energy")]
    EmptyEnsemble,

    /// Exact-oracle operation on a spectrum that is not integral/nonnegative.
    #[error("spectrum not usable for exact oracles: {0}")]
    InvalidSpectrum(String),
}
