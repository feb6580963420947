use modburgers::diagnostics::{ghost_consistency_residual, interface_report, trapezoid};
use modburgers::grid::{ghost_values, interface_velocity_discrete, GridSpec};
use modburgers::model::{
    build_initial_profile, eval_initial_data, extinction_upper_bound, ShockParams, Side,
};
use modburgers::solver::{assemble_cn_system, run, run_observed, SimConfig, SimState};
use proptest::prelude::*;

use modburgers_validation::{cn_fourier_error, fourier_mode, orders, worst_ghost_residual};

#[test]
fn crank_nicolson_second_order_in_space() {
    let errors: Vec<f64> = [10, 20, 40]
        .iter()
        .map(|&n| cn_fourier_error(n, 1e-5, 0.05))
        .collect();
    for p in orders(&errors, 2.0) {
        assert!(p >= 1.8, "spatial order {p}, errors {errors:?}");
    }
}

#[test]
fn crank_nicolson_second_order_in_time() {
    let errors: Vec<f64> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&dt| cn_fourier_error(1000, dt, 0.1))
        .collect();
    for p in orders(&errors, 2.0) {
        assert!(p >= 1.8, "temporal order {p}, errors {errors:?}");
    }
}

#[test]
fn outer_region_stays_at_rest() {
    // zero outer data with u_N = 0 and a Neumann end is a fixed point
    let grid = GridSpec::new(20, 3.0).unwrap();
    let u = grid
        .nodes()
        .map(|y| if y < 1.0 { fourier_mode(y, 0.0) } else { 0.0 })
        .collect();
    let state = SimState {
        t: 0.0,
        u,
        xi: 1.0,
        xi_prime: 0.0,
    };
    let system = assemble_cn_system(&state, 1.0, 0.0, 1e-3, &grid).unwrap();
    let next = system.matrix.solve(&system.rhs).unwrap();
    assert!(next[grid.n_inner..].iter().all(|&v| v == 0.0));
}

#[test]
fn ghost_equations_hold_for_random_inputs() {
    let worst = worst_ghost_residual(100_000, 0x2545_f491_4f6c_dd1d);
    assert!(worst <= 1e-13, "worst scaled residual {worst}");
}

#[test]
fn discrete_velocity_matches_both_one_sided_forms() {
    for &(ul, ur, h, xi) in &[
        (-0.3, 0.5, 0.02, 1.0),
        (-1e-3, 2e-3, 0.05, 0.4),
        (-2.0, 0.1, 0.1, 7.0),
    ] {
        let g = ghost_values(ul, ur, h, xi).unwrap();
        // u_t = 0 at the interface, read from either side of y = 1
        let uy_inner = (g.v_right - ul) / (2.0 * h);
        let uy_outer = (ur - g.v_left) / (2.0 * h);
        let inner = 1.0 - (g.v_right + ul) / (h * h) / (xi * uy_inner);
        let outer = -1.0 - (ur + g.v_left) / (h * h) / (xi * uy_outer);
        let v = interface_velocity_discrete(ul, ur, h, xi).unwrap();
        assert!(
            (v - inner).abs() <= 1e-12 * v.abs().max(1.0),
            "{v} vs {inner}"
        );
        assert!(
            (v - outer).abs() <= 1e-12 * v.abs().max(1.0),
            "{v} vs {outer}"
        );
    }
}

#[test]
fn shock_slope_converges_at_second_order() {
    let xi = 0.8;
    let shock = ShockParams::new(1.5, -0.7, xi).unwrap();
    let exact = shock.jet(xi, Side::Right).d1;
    let errors: Vec<f64> = [20, 40, 80, 160]
        .iter()
        .map(|&n| {
            let grid = GridSpec::new(n, 3.0).unwrap();
            let mut u: Vec<f64> = grid
                .nodes()
                .map(|y| {
                    shock
                        .jet(xi * y, if y > 1.0 { Side::Right } else { Side::Left })
                        .value
                })
                .collect();
            u[grid.n_inner] = 0.0;
            let state = SimState {
                t: 0.0,
                u,
                xi,
                xi_prime: 0.0,
            };
            (interface_report(&state, &grid).unwrap().ux - exact).abs()
        })
        .collect();
    for p in orders(&errors, 2.0) {
        assert!(p >= 1.8, "order {p}, errors {errors:?}");
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}

#[test]
fn extinction_bound_matches_adaptive_quadrature() {
    for alpha in [0.1, 0.5, 1.0, 1.5] {
        let profile = build_initial_profile(alpha).unwrap();
        let z = |x: f64| 1.0 - eval_initial_data(&profile, x);
        // the Gaussian tail beyond x = 60 is below 1e-15 even for alpha = 0.1
        let quad = adaptive_simpson(&z, 0.0, 1.0, 1e-12) + adaptive_simpson(&z, 1.0, 60.0, 1e-12);
        let bound = extinction_upper_bound(alpha).unwrap();
        assert!(
            (quad - bound).abs() < 1e-6,
            "alpha {alpha}: {quad} vs {bound}"
        );
    }
    let profile = build_initial_profile(0.1).unwrap();
    let z = |x: f64| 1.0 - eval_initial_data(&profile, x);
    let quad = adaptive_simpson(&z, 0.0, 1.0, 1e-12) + adaptive_simpson(&z, 1.0, 60.0, 1e-12);
    assert!((quad - 3.0530635).abs() < 1e-6);
}

#[test]
fn extinction_bound_matches_trapezoid() {
    let h = 1e-3;
    for alpha in [0.1, 0.5, 1.0, 1.5] {
        let profile = build_initial_profile(alpha).unwrap();
        let inner: Vec<f64> = (0..=1000)
            .map(|k| 1.0 - eval_initial_data(&profile, k as f64 * h))
            .collect();
        let outer: Vec<f64> = (1000..=20_000)
            .map(|k| 1.0 - eval_initial_data(&profile, k as f64 * h))
            .collect();
        // x = 20 truncates the tail by erfc(20 sqrt(alpha)), below 1e-5 for alpha >= 0.1
        let approx = trapezoid(&inner, h) + trapezoid(&outer, h);
        let bound = extinction_upper_bound(alpha).unwrap();
        assert!(
            (approx - bound).abs() < 1e-5,
            "alpha {alpha}: {approx} vs {bound}"
        );
    }
}

#[test]
fn interface_position_converges_in_dt() {
    let xi_at = |dt: f64| {
        let config = SimConfig {
            dt,
            t_end: 0.04,
            output_every: usize::MAX,
            ..SimConfig::with_alpha(0.5)
        };
        run(&config).unwrap().records.last().unwrap().xi
    };
    let xs: Vec<f64> = [4e-4, 2e-4, 1e-4, 5e-5]
        .iter()
        .map(|&dt| xi_at(dt))
        .collect();
    let diffs: Vec<f64> = xs.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    for p in orders(&diffs, 2.0) {
        assert!(p >= 1.8, "order {p}, xi {xs:?}");
    }
}

#[test]
fn ghost_relations_hold_along_a_run() {
    let config = SimConfig {
        t_end: 0.05,
        ..SimConfig::with_alpha(1.5)
    };
    let mut checked = 0;
    run_observed(&config, |state, grid| {
        let r = ghost_consistency_residual(state, grid).unwrap();
        assert!(r < 1e-12, "residual {r} at t = {}", state.t);
        checked += 1;
    })
    .unwrap();
    assert!(checked > 10);
}

proptest! {
    #[test]
    fn shock_speed_is_odd_under_reflection(up in 0.01f64..10.0, um in -10.0f64..-0.01) {
        let a = ShockParams::new(up, um, 0.0).unwrap().speed();
        let b = ShockParams::new(-um, -up, 0.0).unwrap().speed();
        prop_assert!((a + b).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn exact_shock_residuals_vanish(up in 0.01f64..10.0, um in -10.0f64..-0.01, xi0 in -5.0f64..5.0, d in 0.0f64..3.0) {
        let shock = ShockParams::new(up, um, xi0).unwrap();
        let c = shock.speed();
        // bound by term magnitudes: 1 + c cancels badly when c is near -1
        let scale = (up + um.abs()) * (1.0 + c.abs()).powi(2);
        let jump = modburgers::model::shock_jump_residual(&shock);
        prop_assert!(jump.abs() <= 16.0 * f64::EPSILON * scale, "jump {}", jump);
        for x in [xi0 - d, xi0 + d] {
            let r = modburgers::model::shock_pde_residual(&shock, x);
            prop_assert!(r.abs() <= 16.0 * f64::EPSILON * scale * (1.0 + c.abs()), "pde {}", r);
        }
    }
}

/// Errors of `(u_x, u_xx(xi - 0))` for the piecewise cubic
/// `a s + b s^2 + c_left s^3` (left) / `a s + (b - a) s^2 + c_right s^3`
/// (right), `s = x - xi`, which satisfies the interface conditions.
fn cubic_interface_errors(c_left: f64, c_right: f64) -> Vec<(f64, f64)> {
    let (a, b, xi) = (1.3, 0.4, 0.8);
    [20, 40, 80, 160]
        .iter()
        .map(|&n| {
            let grid = GridSpec::new(n, 3.0).unwrap();
            let mut u: Vec<f64> = grid
                .nodes()
                .map(|y| {
                    let s = xi * (y - 1.0);
                    if y < 1.0 {
                        a * s + b * s * s + c_left * s.powi(3)
                    } else {
                        a * s + (b - a) * s * s + c_right * s.powi(3)
                    }
                })
                .collect();
            u[0] = 0.0;
            u[grid.n_inner] = 0.0;
            let state = SimState {
                t: 0.0,
                u,
                xi,
                xi_prime: 0.0,
            };
            let r = interface_report(&state, &grid).unwrap();
            ((r.ux - a).abs(), (r.uxx_left - 2.0 * b).abs())
        })
        .collect()
}

#[test]
fn interface_derivatives_second_order_for_matching_third_derivative() {
    let errors = cubic_interface_errors(0.7, 0.7);
    let (ux, uxx): (Vec<f64>, Vec<f64>) = errors.into_iter().unzip();
    for p in orders(&ux, 2.0).into_iter().chain(orders(&uxx, 2.0)) {
        assert!(p >= 1.8, "order {p}: {ux:?} {uxx:?}");
    }
}

#[test]
fn third_derivative_jump_limits_curvature_to_first_order() {
    // the two-point interface stencil cannot see u''' on each side, so a
    // jump in u''' leaves an O(h) error in u_xx and in the velocity
    let errors = cubic_interface_errors(0.7, -0.5);
    let uxx: Vec<f64> = errors.iter().map(|e| e.1).collect();
    for p in orders(&uxx, 2.0) {
        assert!((p - 1.0).abs() < 0.1, "order {p}: {uxx:?}");
    }
}
