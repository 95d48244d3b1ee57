//! Numerical thresholds shared by the verification routines.
//!
//! Every tolerance used by the library lives in [`Tolerances`]; the defaults
//! are the values the acceptance suite runs with.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Conjugacy and equivariance residuals (algebraic identities, rounding only).
    pub identity_residual: f64,
    /// Relative rank threshold: singular values below `rank * ||L||` count as zero.
    pub rank: f64,
    /// Eigenvalues closer than `cluster * (1 + ||L||)` are merged.
    pub cluster: f64,
    /// Annihilation residual for generalized eigenvectors, relative to `||L||`.
    pub gen_eigen_residual: f64,
    /// Newton acceptance threshold on `||gamma(x; lambda)||_inf`.
    pub newton: f64,
    /// Steady states closer than this are the same solution.
    pub solution_cluster: f64,
    /// Relative intra-block spread below which a branch counts as synchronous.
    pub sync_spread: f64,
    /// Absolute magnitude below which a branch coordinate counts as zero.
    pub zero_value: f64,
    /// Blow-up bound for trajectories.
    pub blow_up: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity_residual: 1e-12,
            rank: 1e-8,
            cluster: 1e-7,
            gen_eigen_residual: 1e-9,
            newton: 1e-12,
            solution_cluster: 1e-7,
            sync_spread: 1e-6,
            zero_value: 1e2 * f64::EPSILON,
            blow_up: 1e8,
        }
    }
}
