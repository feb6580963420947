//! Uniform grid on the rescaled domain `y in [0, L]` with the interface
//! pinned at `y = 1`, plus the ghost-point algebra that couples the two
//! branches across it.
//!
//! Values are stored in one array `u_0 ..= u_M` with `y_k = k h`,
//! `u_0 = u_N = 0`. The ghost values `v_{N+1}` (inner branch continued to
//! `y = 1 + h`) and `v_{N-1}` (outer branch continued to `y = 1 - h`) are never
//! stored; they are recomputed from `u_{N-1}`, `u_{N+1}` when needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default floor on `|u_{N+1} - u_{N-1}|` below which the interface slope is
/// treated as collapsed.
pub const DEFAULT_SLOPE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// `N`: number of intervals on `[0, 1]`.
    pub n_inner: usize,
    /// `M`: index of the last node, `y_M = L`.
    pub m_total: usize,
    pub domain_length: f64,
    /// `h = 1 / N = L / M`.
    pub step: f64,
}

impl GridSpec {
    /// Grid with `N` intervals on `[0, 1]` and `M = N L` overall; `N L` must
    /// be an integer.
    pub fn new(n_inner: usize, domain_length: f64) -> Result<Self> {
        if n_inner < 4 {
            return Err(Error::Config(format!(
                "need at least 4 intervals on [0, 1], got {n_inner}"
            )));
        }
        if !(domain_length > 1.0 && domain_length.is_finite()) {
            return Err(Error::Config(format!(
                "domain length must exceed 1, got {domain_length}"
            )));
        }
        let m_exact = n_inner as f64 * domain_length;
        let m_total = m_exact.round();
        if (m_exact - m_total).abs() > 1e-9 * m_exact {
            return Err(Error::Config(format!(
                "L = {domain_length} is not a multiple of h = 1/{n_inner}"
            )));
        }
        let m_total = m_total as usize;
        if m_total <= n_inner {
            return Err(Error::Config("outer region is empty".into()));
        }
        Ok(Self {
            n_inner,
            m_total,
            domain_length: m_total as f64 / n_inner as f64,
            step: 1.0 / n_inner as f64,
        })
    }

    /// Grid from a step size; `1 / h` must be an integer.
    pub fn from_step(step: f64, domain_length: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Config(format!("step must be positive, got {step}")));
        }
        let n_exact = 1.0 / step;
        let n = n_exact.round();
        if (n_exact - n).abs() > 1e-9 * n_exact {
            return Err(Error::Config(format!(
                "1/h must be an integer, got h = {step}"
            )));
        }
        Self::new(n as usize, domain_length)
    }

    pub fn len(&self) -> usize {
        self.m_total + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn y(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.y(k))
    }
}

/// Ghost values at the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhostPair {
    /// Outer branch continued to `y = 1 - h`.
    pub v_left: f64,
    /// Inner branch continued to `y = 1 + h`.
    pub v_right: f64,
}

fn check_product(h: f64, xi: f64) -> Result<f64> {
    let product = h * xi;
    if !(product < 2.0) {
        return Err(Error::Singular { product });
    }
    Ok(product)
}

/// Solves the continuity / jump equations for the two ghost values.
pub fn ghost_values(u_left: f64, u_right: f64, h: f64, xi: f64) -> Result<GhostPair> {
    let hx = check_product(h, xi)?;
    let denom = 2.0 - hx;
    Ok(GhostPair {
        v_right: (2.0 * u_right - hx * u_left) / denom,
        v_left: (2.0 * u_left - hx * u_right) / denom,
    })
}

/// Interface derivatives in the original coordinate `x = xi y`:
/// `(u_x, u_xx(xi - 0))`.
pub fn interface_derivatives(u_left: f64, u_right: f64, h: f64, xi: f64) -> Result<(f64, f64)> {
    let hx = check_product(h, xi)?;
    let denom = 2.0 - hx;
    let ux = (u_right - u_left) / (hx * denom);
    let uxx_left = 2.0 * (u_right + u_left * (1.0 - hx)) / (hx * hx * denom);
    Ok((ux, uxx_left))
}

/// Discrete interface velocity with the default slope floor.
pub fn interface_velocity_discrete(u_left: f64, u_right: f64, h: f64, xi: f64) -> Result<f64> {
    interface_velocity_with_floor(u_left, u_right, h, xi, DEFAULT_SLOPE_FLOOR)
}

/// `xi' = -(2 - h xi)(u_{N+1} + u_{N-1}) / (h xi (u_{N+1} - u_{N-1}))`.
pub fn interface_velocity_with_floor(
    u_left: f64,
    u_right: f64,
    h: f64,
    xi: f64,
    floor: f64,
) -> Result<f64> {
    let hx = check_product(h, xi)?;
    let difference = u_right - u_left;
    if !(difference.abs() >= floor) {
        return Err(Error::DegenerateSlope { difference, floor });
    }
    Ok(-(2.0 - hx) * (u_right + u_left) / (hx * difference))
}
