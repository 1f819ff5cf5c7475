//! Logarithmic map between the real line and the half line `(0, inf)`.
//!
//! `omega = ln(z) / k` sends `(0, inf)` onto the real line, and
//! `z = e^{k omega}` is its inverse. A function `g` on the real line
//! becomes `F(z) = g(ln(z) / k)` on the half line.

use crate::error::{Error, Result};
use crate::hermite::QuadratureGrid;

/// Below this the mapped basis is treated as exactly zero.
pub const UNDERFLOW_CUTOFF: f64 = 1e-300;

/// The map `omega = ln(z) / k` for a fixed steepness `k > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMap {
    k: f64,
}

impl LogMap {
    pub fn new(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!(
                "map constant k must be positive (got {k})"
            )));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Half line to real line.
    pub fn forward(&self, z: f64) -> Result<f64> {
        if !(z > 0.0) {
            return Err(Error::Domain(format!("log map needs z > 0 (got {z})")));
        }
        Ok(z.ln() / self.k)
    }

    /// Real line to half line.
    pub fn inverse(&self, omega: f64) -> f64 {
        (self.k * omega).exp()
    }

    /// Images `e^{k x_j}` of the grid nodes; strictly increasing.
    pub fn transform_nodes(&self, grid: &QuadratureGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&x| self.inverse(x)).collect()
    }

    /// Derivatives of `F(z) = g(ln(z)/k)` up to third order.
    ///
    /// `g_derivs` holds `g'`, `g''`, `g'''` evaluated at `ln(z)/k`.
    pub fn chain_factors(&self, z: f64, g_derivs: [f64; 3]) -> Result<[f64; 3]> {
        chain_factors(z, self.k, g_derivs)
    }
}

/// See [`LogMap::transform_nodes`].
pub fn transform_nodes(grid: &QuadratureGrid, k: f64) -> Result<Vec<f64>> {
    Ok(LogMap::new(k)?.transform_nodes(grid))
}

/// Exact chain rule for `F(z) = g(ln(z)/k)`:
///
/// ```text
/// F'   = g' / (k z)
/// F''  = g'' / (k^2 z^2) - g' / (k z^2)
/// F''' = g''' / (k^3 z^3) - 3 g'' / (k^2 z^3) + 2 g' / (k z^3)
/// ```
pub fn chain_factors(z: f64, k: f64, g_derivs: [f64; 3]) -> Result<[f64; 3]> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("chain rule needs z > 0 (got {z})")));
    }
    let [g1, g2, g3] = g_derivs;
    let kz = k * z;
    let z2 = z * z;
    let z3 = z2 * z;
    Ok([
        g1 / kz,
        g2 / (k * k * z2) - g1 / (k * z2),
        g3 / (k * k * k * z3) - 3.0 * g2 / (k * k * z3) + 2.0 * g1 / (k * z3),
    ])
}
