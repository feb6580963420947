//! Time evolution of the interface-fitted system.
//!
//! With `y = x / xi(t)` the inner region `(0, xi)` and outer region
//! `(xi, inf)` map onto `(0, 1)` and `(1, L]`, where
//!
//! ```text
//! u_t = xi^-1 (xi' y - 1) u_y + xi^-2 u_yy    0 < y < 1
//! u_t = xi^-1 (xi' y + 1) u_y + xi^-2 u_yy    1 < y < L
//! ```
//!
//! with `u(0) = u(1) = 0`, `u_y(L) = 0`, and the interface velocity `xi'`
//! read off the two nodes next to `y = 1` through the ghost-point relations.
//!
//! Each step is Crank-Nicolson in `u` with `xi` frozen at the Heun midpoint.
//! The interface velocity is strongly coupled to `u_{N+1} + u_{N-1}`: fed
//! back explicitly it relaxes at a rate `~ 2 / (h xi)^2` and the iteration
//! blows up once `xi` drops to about `0.4` at `h = 0.02, dt = 1e-4`. The
//! coupling is therefore kept implicit. The new velocity is linear in
//! `u_{N+1} + u_{N-1}` once the slope `u_{N+1} - u_{N-1}` is fixed, which adds
//! a rank-one term to the tridiagonal CN matrix. The slope and the midpoint
//! `xi` are refreshed over a few corrector sweeps, each closing with the Heun
//! update `xi^{n+1} = xi^n + dt/2 (xi'^n + xi'^{n+1})`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::diagnostics;
use crate::error::{Error, Result};
use crate::grid::{interface_velocity_with_floor, GridSpec, DEFAULT_SLOPE_FLOOR};
use crate::linalg::Tridiagonal;
use crate::model::{build_initial_profile, eval_initial_data};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimConfig {
    pub alpha: f64,
    /// `L`.
    pub domain_length: f64,
    /// `h`.
    pub step: f64,
    /// `tau`.
    pub dt: f64,
    pub t_end: f64,
    /// The run stops once `xi <= xi_stop`.
    pub xi_stop: f64,
    /// Emit a trace record every this many steps.
    pub output_every: usize,
    /// Corrector sweeps per step.
    pub corrector_sweeps: usize,
    /// Floor on `|u_{N+1} - u_{N-1}|`.
    pub slope_floor: f64,
}

impl SimConfig {
    /// Run parameters `L = 10`, `h = 0.02`, `tau = 1e-4`, stop at `xi = 0.3`.
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            domain_length: 10.0,
            step: 0.02,
            dt: 1e-4,
            t_end: 5.0,
            xi_stop: 0.3,
            output_every: 10,
            corrector_sweeps: 3,
            slope_floor: DEFAULT_SLOPE_FLOOR,
        }
    }

    pub fn validate(&self) -> Result<GridSpec> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if !(self.xi_stop > 0.0 && self.xi_stop < 1.0) {
            return bad(format!("xi_stop must lie in (0, 1), got {}", self.xi_stop));
        }
        if self.output_every == 0 {
            return bad("output_every must be at least 1".into());
        }
        if self.corrector_sweeps == 0 {
            return bad("corrector_sweeps must be at least 1".into());
        }
        if !(self.slope_floor >= 0.0) {
            return bad(format!(
                "slope floor must be nonnegative, got {}",
                self.slope_floor
            ));
        }
        if !(self.step < 2.0) {
            // h * xi(0) with xi(0) = 1
            return Err(Error::Singular { product: self.step });
        }
        GridSpec::from_step(self.step, self.domain_length)
    }
}

/// Solution snapshot on the rescaled grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    /// `u(t, y_k)`, `k = 0 ..= M`, with `u_0 = u_N = 0`.
    pub u: Vec<f64>,
    pub xi: f64,
    pub xi_prime: f64,
}

impl SimState {
    /// Initial data sampled at `y_k` with `xi(0) = 1`.
    pub fn initial(alpha: f64, grid: &GridSpec, slope_floor: f64) -> Result<Self> {
        let profile = build_initial_profile(alpha)?;
        let mut u: Vec<f64> = grid
            .nodes()
            .map(|y| eval_initial_data(&profile, y))
            .collect();
        u[0] = 0.0;
        u[grid.n_inner] = 0.0;
        let xi_prime = velocity(&u, 1.0, grid, slope_floor)?;
        Ok(Self {
            t: 0.0,
            u,
            xi: 1.0,
            xi_prime,
        })
    }

    pub fn inner(&self, grid: &GridSpec) -> &[f64] {
        &self.u[..=grid.n_inner]
    }

    /// `(u_{N-1}, u_{N+1})`.
    pub fn interface_neighbours(&self, grid: &GridSpec) -> (f64, f64) {
        (self.u[grid.n_inner - 1], self.u[grid.n_inner + 1])
    }
}

/// Diagnostics written once per output step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub xi: f64,
    pub xi_prime: f64,
    pub ux: f64,
    pub uxx_left: f64,
    pub uxx_right: f64,
    pub mass_region: f64,
    pub energy_region: f64,
    pub z_mass: f64,
}

impl TraceRecord {
    pub const FIELDS: [&'static str; 9] = [
        "t",
        "xi",
        "xi_prime",
        "ux",
        "uxx_left",
        "uxx_right",
        "mass_region",
        "energy_region",
        "z_mass",
    ];

    pub fn values(&self) -> [f64; 9] {
        [
            self.t,
            self.xi,
            self.xi_prime,
            self.ux,
            self.uxx_left,
            self.uxx_right,
            self.mass_region,
            self.energy_region,
            self.z_mass,
        ]
    }

    pub fn from_values(v: [f64; 9]) -> Self {
        Self {
            t: v[0],
            xi: v[1],
            xi_prime: v[2],
            ux: v[3],
            uxx_left: v[4],
            uxx_right: v[5],
            mass_region: v[6],
            energy_region: v[7],
            z_mass: v[8],
        }
    }
}

/// Why a run ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum StopReason {
    /// Reached `t_end`.
    EndTime,
    /// `xi` fell to `xi_stop`.
    InterfaceThreshold,
    /// The interface slope dropped below the floor.
    DegenerateSlope,
    /// `h xi >= 2`.
    Singular,
    /// Non-finite values or a failed linear solve.
    Breakdown { message: String },
}

impl StopReason {
    pub fn is_extinction(&self) -> bool {
        matches!(self, Self::InterfaceThreshold | Self::DegenerateSlope)
    }

    fn from_error(err: &Error) -> Self {
        match err {
            Error::DegenerateSlope { .. } => Self::DegenerateSlope,
            Error::Singular { .. } => Self::Singular,
            other => Self::Breakdown {
                message: other.to_string(),
            },
        }
    }
}

/// Output of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub stop: StopReason,
    /// Completed time steps.
    pub steps: usize,
    /// Steps after which some node had the wrong sign for its region.
    pub sign_warnings: usize,
}

/// `(I - dt/2 A) u^{n+1} = (I + dt/2 A) u^n` with rows `0` and `N` pinned to
/// zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CnSystem {
    pub matrix: Tridiagonal,
    pub rhs: Vec<f64>,
}

fn velocity(u: &[f64], xi: f64, grid: &GridSpec, floor: f64) -> Result<f64> {
    let n = grid.n_inner;
    interface_velocity_with_floor(u[n - 1], u[n + 1], grid.step, xi, floor)
}

/// Central-difference discretization `A` of the two advection-diffusion
/// operators with `xi`, `xi'` frozen. The Neumann closure `u_{M+1} = u_{M-1}`
/// is folded into row `M`.
fn spatial_operator(xi: f64, xi_prime: f64, grid: &GridSpec) -> Tridiagonal {
    let (n, m, h) = (grid.n_inner, grid.m_total, grid.step);
    let diffusion = 1.0 / (xi * xi * h * h);
    let mut a = Tridiagonal::zeros(m + 1);
    for k in (1..=m).filter(|&k| k != n) {
        let y = grid.y(k);
        let drift = if k < n { -1.0 } else { 1.0 };
        let advection = (xi_prime * y + drift) / (xi * 2.0 * h);
        a.lower[k] = diffusion - advection;
        a.diag[k] = -2.0 * diffusion;
        a.upper[k] = diffusion + advection;
    }
    a.lower[m] += a.upper[m];
    a.upper[m] = 0.0;
    a
}

pub fn assemble_cn_system(
    state: &SimState,
    xi_frozen: f64,
    xi_prime_frozen: f64,
    dt: f64,
    grid: &GridSpec,
) -> Result<CnSystem> {
    let product = grid.step * xi_frozen;
    if !(product < 2.0) {
        return Err(Error::Singular { product });
    }
    let a = spatial_operator(xi_frozen, xi_prime_frozen, grid);
    let au = a.matvec(&state.u);
    let rhs: Vec<f64> = state
        .u
        .iter()
        .zip(&au)
        .map(|(u, au)| u + 0.5 * dt * au)
        .collect();
    let mut matrix = Tridiagonal {
        lower: a.lower.iter().map(|v| -0.5 * dt * v).collect(),
        diag: a.diag.iter().map(|v| 1.0 - 0.5 * dt * v).collect(),
        upper: a.upper.iter().map(|v| -0.5 * dt * v).collect(),
    };
    let mut rhs = rhs;
    for k in [0, grid.n_inner] {
        matrix.pin_row(k);
        rhs[k] = 0.0;
    }
    Ok(CnSystem { matrix, rhs })
}

/// `(y_k / xi) u_y(y_k)` by central differences; the part of the operator
/// multiplied by `xi'`. Zero on the pinned rows and the Neumann row.
fn velocity_shape(u: &[f64], xi: f64, grid: &GridSpec) -> Vec<f64> {
    let (n, m, h) = (grid.n_inner, grid.m_total, grid.step);
    let mut w = vec![0.0; m + 1];
    for k in (1..m).filter(|&k| k != n) {
        w[k] = grid.y(k) / xi * (u[k + 1] - u[k - 1]) / (2.0 * h);
    }
    w
}

/// Advances one time step of width `config.dt`.
pub fn step(state: &SimState, config: &SimConfig, grid: &GridSpec) -> Result<SimState> {
    let (n, h, dt) = (grid.n_inner, grid.step, config.dt);
    let floor = config.slope_floor;
    let v_old = velocity(&state.u, state.xi, grid, floor)?;

    let mut xi_new = state.xi + dt * v_old;
    let mut slope = state.u[n + 1] - state.u[n - 1];
    let mut u_new = state.u.clone();
    let coupling = [(n - 1, 1.0), (n + 1, 1.0)];

    for _ in 0..config.corrector_sweeps {
        if !(xi_new > 0.0) {
            return Err(Error::Breakdown {
                t: state.t,
                reason: format!("interface moved to xi = {xi_new}"),
            });
        }
        let xi_mid = 0.5 * (state.xi + xi_new);
        let CnSystem { matrix, mut rhs } = assemble_cn_system(state, xi_mid, v_old, dt, grid)?;

        let hx = h * xi_new;
        if !(hx < 2.0) {
            return Err(Error::Singular { product: hx });
        }
        if !(slope.abs() >= floor) {
            return Err(Error::DegenerateSlope {
                difference: slope,
                floor,
            });
        }
        // xi'^{n+1} ~ -kappa (u_{N+1} + u_{N-1})^{n+1}
        let kappa = (2.0 - hx) / (hx * slope);
        let w = velocity_shape(&state.u, xi_mid, grid);
        let p: Vec<f64> = w.iter().map(|wk| 0.5 * dt * kappa * wk).collect();
        rhs.iter_mut()
            .zip(&w)
            .for_each(|(r, wk)| *r -= 0.5 * dt * v_old * wk);

        u_new = matrix.solve_rank_one(&p, &coupling, &rhs)?;
        let v_new = velocity(&u_new, xi_new, grid, floor)?;
        xi_new = state.xi + 0.5 * dt * (v_old + v_new);
        slope = u_new[n + 1] - u_new[n - 1];
    }

    u_new[0] = 0.0;
    u_new[n] = 0.0;
    if !(xi_new > 0.0 && xi_new.is_finite()) || u_new.iter().any(|v| !v.is_finite()) {
        return Err(Error::Breakdown {
            t: state.t + dt,
            reason: "non-finite state".into(),
        });
    }
    let xi_prime = velocity(&u_new, xi_new, grid, floor)?;
    Ok(SimState {
        t: state.t + dt,
        u: u_new,
        xi: xi_new,
        xi_prime,
    })
}

/// Runs from the initial data until `t_end`, the interface threshold, or a
/// numerical stop.
pub fn run(config: &SimConfig) -> Result<Trace> {
    run_observed(config, |_, _| {})
}

/// [`run`] that also hands every emitted state to `observe`.
pub fn run_observed<F>(config: &SimConfig, mut observe: F) -> Result<Trace>
where
    F: FnMut(&SimState, &GridSpec),
{
    let grid = config.validate()?;
    let mut trace = Trace {
        records: Vec::new(),
        stop: StopReason::EndTime,
        steps: 0,
        sign_warnings: 0,
    };

    let mut state = match SimState::initial(config.alpha, &grid, config.slope_floor) {
        Ok(s) => s,
        Err(err @ Error::Domain(_)) => return Err(Error::Config(err.to_string())),
        Err(err) => {
            trace.stop = StopReason::from_error(&err);
            return Ok(trace);
        }
    };

    let emit = |state: &SimState, trace: &mut Trace, observe: &mut F| -> Result<()> {
        observe(state, &grid);
        trace.records.push(diagnostics::trace_record(state, &grid)?);
        Ok(())
    };
    if let Err(err) = emit(&state, &mut trace, &mut observe) {
        trace.stop = StopReason::from_error(&err);
        return Ok(trace);
    }

    let total_steps = (config.t_end / config.dt - 1e-9).ceil() as usize;
    let mut emitted_last = true;
    while trace.steps < total_steps {
        let mut next = match step(&state, config, &grid) {
            Ok(next) => next,
            Err(err) => {
                trace.stop = StopReason::from_error(&err);
                break;
            }
        };
        trace.steps += 1;
        next.t = trace.steps as f64 * config.dt;
        state = next;

        let violations = diagnostics::sign_violations(&state, &grid);
        if violations > 0 {
            if trace.sign_warnings == 0 {
                warn!(
                    "alpha = {}: {violations} node(s) left their sign regime at t = {}",
                    config.alpha, state.t
                );
            }
            trace.sign_warnings += 1;
        }

        let reached = state.xi <= config.xi_stop;
        if reached {
            trace.stop = StopReason::InterfaceThreshold;
        }
        emitted_last = false;
        if trace.steps.is_multiple_of(config.output_every) || reached || trace.steps == total_steps
        {
            if let Err(err) = emit(&state, &mut trace, &mut observe) {
                trace.stop = StopReason::from_error(&err);
                break;
            }
            emitted_last = true;
        }
        if reached {
            break;
        }
    }

    // A numerical stop mid-interval still reports the last good state.
    if !emitted_last {
        if let Ok(record) = diagnostics::trace_record(&state, &grid) {
            observe(&state, &grid);
            trace.records.push(record);
        }
    }
    Ok(trace)
}
