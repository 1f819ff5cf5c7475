use thiserror::Error;

/// Errors raised by the spectral solver and the shooting oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two inputs that must agree in shape or configuration do not.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A stored object no longer satisfies its invariants.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// An iterative numerical kernel failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The Newton Jacobian is rank deficient to working precision.
    #[error("singular Jacobian at iteration {iteration} (pivot ratio {pivot_ratio:.3e})")]
    SingularJacobian { iteration: usize, pivot_ratio: f64 },

    /// The initial-value integration blew up.
    #[error("trajectory diverged at tau = {tau:.6} (f' = {slope:.3e})")]
    Divergence { tau: f64, slope: f64 },

    /// The shooting bracket does not enclose a sign change.
    #[error(
        "no sign change in bracket [{low}, {high}]: mismatches {low_mismatch:.3e}, {high_mismatch:.3e}"
    )]
    Bracketing {
        low: f64,
        high: f64,
        low_mismatch: f64,
        high_mismatch: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
