//! Integral and interface diagnostics of a solution snapshot, reported in
//! the original coordinate `x = xi y`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{ghost_values, interface_derivatives, GridSpec};
use crate::solver::{SimState, TraceRecord};

/// Composite trapezoid rule on a uniform grid.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => h * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// `M(t) = xi int_0^1 u dy`.
pub fn region_mass(state: &SimState, grid: &GridSpec) -> f64 {
    state.xi * trapezoid(state.inner(grid), grid.step)
}

/// `E(t) = xi int_0^1 u^2 dy`.
pub fn region_energy(state: &SimState, grid: &GridSpec) -> f64 {
    let squares: Vec<f64> = state.inner(grid).iter().map(|u| u * u).collect();
    state.xi * trapezoid(&squares, grid.step)
}

/// `int_0^inf (1 - u) dx`, truncated at `x = xi L`.
pub fn z_mass(state: &SimState, grid: &GridSpec) -> f64 {
    let z: Vec<f64> = state.u.iter().map(|u| 1.0 - u).collect();
    state.xi * trapezoid(&z, grid.step)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InterfaceReport {
    pub ux: f64,
    pub uxx_left: f64,
    pub uxx_right: f64,
}

/// Interface derivatives; `uxx_right` follows from the jump condition
/// `[u_xx] = -2 u_x`.
pub fn interface_report(state: &SimState, grid: &GridSpec) -> Result<InterfaceReport> {
    let (left, right) = state.interface_neighbours(grid);
    let (ux, uxx_left) = interface_derivatives(left, right, grid.step, state.xi)?;
    Ok(InterfaceReport {
        ux,
        uxx_left,
        uxx_right: uxx_left - 2.0 * ux,
    })
}

/// `u_xx(xi + 0)` from the outer-branch stencil with the ghost `v_{N-1}`.
pub fn outer_branch_uxx(state: &SimState, grid: &GridSpec) -> Result<f64> {
    let (left, right) = state.interface_neighbours(grid);
    let ghosts = ghost_values(left, right, grid.step, state.xi)?;
    let hx = grid.step * state.xi;
    Ok((right + ghosts.v_left) / (hx * hx))
}

/// Largest residual of the two ghost-point equations for the current state,
/// scaled by `h^2`.
pub fn ghost_consistency_residual(state: &SimState, grid: &GridSpec) -> Result<f64> {
    let (left, right) = state.interface_neighbours(grid);
    let h = grid.step;
    let g = ghost_values(left, right, h, state.xi)?;
    let continuity = (g.v_right - left) / (2.0 * h) - (right - g.v_left) / (2.0 * h);
    let jump = (right + g.v_left) / (h * h) - (g.v_right + left) / (h * h)
        + 2.0 * state.xi * (g.v_right - left) / (2.0 * h);
    Ok(continuity.abs().max(jump.abs()) * h * h)
}

/// Number of nodes whose sign disagrees with their region: `u < 0` inside
/// `(0, 1)` and `u > 0` on `(1, L]`.
pub fn sign_violations(state: &SimState, grid: &GridSpec) -> usize {
    let n = grid.n_inner;
    let inner = state.u[1..n].iter().filter(|&&u| u >= 0.0).count();
    let outer = state.u[n + 1..].iter().filter(|&&u| u <= 0.0).count();
    inner + outer
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnergyReport {
    pub t: f64,
    pub mass_region: f64,
    pub energy_region: f64,
    pub z_mass: f64,
    /// `M(0) - t - M(t)`; nonnegative up to discretization error.
    pub bound_slack: f64,
}

pub fn energy_report(state: &SimState, grid: &GridSpec, z_mass_initial: f64) -> EnergyReport {
    let z = z_mass(state, grid);
    EnergyReport {
        t: state.t,
        mass_region: region_mass(state, grid),
        energy_region: region_energy(state, grid),
        z_mass: z,
        bound_slack: z_mass_initial - state.t - z,
    }
}

pub fn trace_record(state: &SimState, grid: &GridSpec) -> Result<TraceRecord> {
    let iface = interface_report(state, grid)?;
    Ok(TraceRecord {
        t: state.t,
        xi: state.xi,
        xi_prime: state.xi_prime,
        ux: iface.ux,
        uxx_left: iface.uxx_left,
        uxx_right: iface.uxx_right,
        mass_region: region_mass(state, grid),
        energy_region: region_energy(state, grid),
        z_mass: z_mass(state, grid),
    })
}
