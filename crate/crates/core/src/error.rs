//! Error type shared by all modules of the crate.

use num_complex::Complex64;

use crate::semiflow::FlowResult;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGridSize(usize),

    #[error("expected {expected} values for this grid, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),

    #[error("parameter {name} = {value} violates {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("non-finite value encountered during quadrature near z = {0}")]
    Quadrature(Complex64),

    #[error("evaluation produced a non-finite value at probe point {0}")]
    ProbeFailure(Complex64),

    #[error("Re F dips to {min_re:.3e} on the sample set; not a Berkson-Porta generator")]
    InvalidGenerator { min_re: f64 },

    #[error("boundary angle condition violated: max Re(G nu-bar) = {max_re:.3e} exceeds 1e-3")]
    AngleConditionViolated { max_re: f64 },

    #[error("step size underflow at t = {t_reached:.6e}; integration stalled")]
    StepUnderflow {
        t_reached: f64,
        partial: Box<FlowResult>,
    },

    #[error("flow left the closed disk at t = {t:.6e}: |z| = {radius:.12}")]
    InvarianceViolation { t: f64, radius: f64 },

    #[error("flow integration failed at boundary node {index}: {source}")]
    NodeIntegration {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("univalence criterion failed: sum of j*|c_j| = {0:.6} >= 1")]
    NotUnivalent(f64),

    #[error("Newton inversion did not converge for target {target}; last residual {residual:.3e}")]
    InversionFailed { target: Complex64, residual: f64 },

    #[error("boundary correspondence iteration stopped after {iters} iterations; residual {residual:.3e}")]
    MappingNotConverged { iters: usize, residual: f64 },

    #[error("degenerate map derivative: |k'| = {0:.3e}")]
    DegenerateMap(f64),

    #[error("coboundary weight magnitude below 1e-12 at z = {0}")]
    DegenerateWeight(Complex64),

    #[error("pairing did not settle along the radius sequence; last delta {0:.3e}")]
    PairingDiverged(f64),

    #[error("initial data has non-analytic content of magnitude {0:.3e}")]
    NonAnalyticData(f64),

    #[error("spectral content of magnitude {0:.3e} outside the resolvable band")]
    SpectralHeadroom(f64),

    #[error("Denjoy-Wolff seeds disagree by {0:.3e} after the flow horizon")]
    DenjoyWolffDisagreement(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
