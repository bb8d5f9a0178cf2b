use serde::{Deserialize, Serialize};

/// Numeric tolerances shared by predicates, tracers and estimators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Sine of the angle below which two directions count as parallel.
    pub tol_dir: f64,
    /// Slack for "gauge equals one" membership.
    pub tol_norm: f64,
    /// Slack for orthogonality predicates.
    pub tol_orth: f64,
    /// Target precision of one-dimensional minimizations.
    pub tol_opt: f64,
    /// Bisector membership `|‖p-x‖ - ‖p-y‖|`.
    pub tol_bis: f64,
    /// Slack for assertions on estimated constants.
    pub tol_const: f64,
    /// Circle grid used by Roberts checks on non-polygonal norms.
    pub n_roberts: usize,
    /// Supporting directions sampled across a polygon vertex cone.
    pub n_fan: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_dir: 1e-9,
            tol_norm: 1e-10,
            tol_orth: 1e-9,
            tol_opt: 1e-12,
            tol_bis: 1e-10,
            tol_const: 1e-6,
            n_roberts: 4096,
            n_fan: 64,
        }
    }
}
