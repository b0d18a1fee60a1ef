//! Numerical tolerances shared by pricing, hedging and the acceptance runs.

use serde::{Deserialize, Serialize};

/// Single record of the numerical thresholds used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Quotes closer to expiry than this return the payoff and flag greeks.
    pub near_expiry: f64,
    /// Node-doubling disagreement allowed in quadrature, relative to the
    /// absolute integrand mass.
    pub quadrature_rel: f64,
    /// Hedge-option gamma below this makes the delta-gamma solve degenerate.
    pub gamma_floor: f64,
    /// Hedge delta below this is rejected by the delta solver.
    pub delta_floor: f64,
    /// Relative step for third derivatives: the time step is this times the
    /// time to maturity, the spot step this times `x sqrt(tau / T)`.
    pub third_derivative_step: f64,
    /// Relative step used for finite-difference greeks.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            near_expiry: 1e-8,
            quadrature_rel: 1e-9,
            gamma_floor: 1e-10,
            delta_floor: 1e-12,
            third_derivative_step: 1e-4,
            fd_step: 1e-5,
        }
    }
}
