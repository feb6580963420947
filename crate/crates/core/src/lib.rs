//! Odd three-interface shocks of the modular Burgers' equation
//! `u_t = |u|_x + u_xx`.
//!
//! The crate evolves the interface-fitted boundary-value problem on
//! `(0, xi(t))` and `(xi(t), inf)`, tracks the interface towards coalescence,
//! and estimates the extinction time and scaling exponents of the shrinking
//! region by log-log regression.
//!
//! - [`model`]: exact traveling shock, initial data, extinction-time bound.
//! - [`grid`]: rescaled grid, ghost points, interface derivatives.
//! - [`solver`]: Crank-Nicolson / Heun time stepping.
//! - [`diagnostics`]: region mass and energy, z-mass, interface report.
//! - [`scaling`]: extinction-time scan and power-law fits.

// `!(x < y)` is used on purpose throughout so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod scaling;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use model::{InitialProfile, ShockParams};
pub use scaling::{FitConfig, PowerFit, Window};
pub use solver::{SimConfig, SimState, StopReason, Trace, TraceRecord};
