//! Shared fixtures for the acceptance suite: a closed-form Fourier oracle for
//! the Crank-Nicolson scheme, random ghost-point checks, and a small
//! deterministic random source.

use modburgers::grid::GridSpec;
use modburgers::solver::{assemble_cn_system, SimState};

/// `u_t = -u_y + u_yy` on `(0, 1)` with Dirichlet ends has the exact mode
/// `exp(y/2 - t/4 - pi^2 t) sin(pi y)`.
pub fn fourier_mode(y: f64, t: f64) -> f64 {
    use std::f64::consts::PI;
    (0.5 * y - 0.25 * t - PI * PI * t).exp() * (PI * y).sin()
}

/// Max-norm error of the frozen-coefficient CN scheme (`xi = 1`, `xi' = 0`)
/// on the inner region at `t_end`.
pub fn cn_fourier_error(n: usize, dt: f64, t_end: f64) -> f64 {
    let grid = GridSpec::new(n, 2.0).unwrap();
    let u = grid
        .nodes()
        .map(|y| if y < 1.0 { fourier_mode(y, 0.0) } else { 0.0 })
        .collect();
    let mut state = SimState {
        t: 0.0,
        u,
        xi: 1.0,
        xi_prime: 0.0,
    };
    let steps = (t_end / dt).round() as usize;
    for _ in 0..steps {
        let system = assemble_cn_system(&state, 1.0, 0.0, dt, &grid).unwrap();
        state.u = system.matrix.solve(&system.rhs).unwrap();
        state.t += dt;
    }
    (0..=n)
        .map(|k| (state.u[k] - fourier_mode(grid.y(k), t_end)).abs())
        .fold(0.0, f64::max)
}

/// Observed orders of a sequence of errors for a constant refinement ratio.
pub fn orders(errors: &[f64], ratio: f64) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0] / w[1]).ln() / ratio.ln())
        .collect()
}

/// Deterministic uniform numbers in `[0, 1)` from a 64-bit LCG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Largest scaled residual of the continuity and jump equations over
/// `count` random ghost-point inputs.
pub fn worst_ghost_residual(count: usize, seed: u64) -> f64 {
    use modburgers::grid::ghost_values;
    let mut rng = Lcg(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let h = 1e-3 + 0.2 * rng.uniform();
        let xi = (1.99 / h) * rng.uniform().max(1e-6);
        let (ul, ur) = (20.0 * rng.uniform() - 10.0, 20.0 * rng.uniform() - 10.0);
        let g = ghost_values(ul, ur, h, xi).unwrap();
        let hx = h * xi;
        let scale = ul.abs().max(ur.abs()).max(1.0) * (1.0 + hx) / (2.0 - hx);

        let continuity = (g.v_right - ul) / (2.0 * h) - (ur - g.v_left) / (2.0 * h);
        let lhs = (ur + g.v_left) / (h * h) - (g.v_right + ul) / (h * h);
        let rhs = -2.0 * xi * (g.v_right - ul) / (2.0 * h);
        worst = worst
            .max(continuity.abs() * h / scale)
            .max((lhs - rhs).abs() * h * h / (scale * (1.0 + hx)));
    }
    worst
}
