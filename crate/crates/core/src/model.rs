//! Exact solutions, interface-consistent initial data and the closed-form
//! extinction-time bound. Nothing here depends on a discretization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::erfcx;

/// Asymptotic states and interface location of a traveling viscous shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockParams {
    pub u_plus: f64,
    pub u_minus: f64,
    pub xi0: f64,
}

/// Side of an interface from which a one-sided derivative is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Value and first two derivatives of a profile at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Speed selected by the asymptotic states, `c = -(U+ + U-) / (U+ - U-)`.
pub fn shock_speed(u_plus: f64, u_minus: f64) -> Result<f64> {
    if !(u_minus < 0.0 && 0.0 < u_plus) {
        return Err(Error::Domain(format!(
            "shock needs u_minus < 0 < u_plus, got u_minus = {u_minus}, u_plus = {u_plus}"
        )));
    }
    Ok(-(u_plus + u_minus) / (u_plus - u_minus))
}

impl ShockParams {
    pub fn new(u_plus: f64, u_minus: f64, xi0: f64) -> Result<Self> {
        shock_speed(u_plus, u_minus)?;
        if !xi0.is_finite() {
            return Err(Error::Domain(format!(
                "interface location must be finite, got {xi0}"
            )));
        }
        Ok(Self {
            u_plus,
            u_minus,
            xi0,
        })
    }

    pub fn speed(&self) -> f64 {
        -(self.u_plus + self.u_minus) / (self.u_plus - self.u_minus)
    }

    /// Profile and derivatives on one branch. The branch formula is used as
    /// given even past `xi0`, which is what one-sided limits need.
    pub fn jet(&self, xi: f64, side: Side) -> Jet {
        let c = self.speed();
        match side {
            Side::Right => {
                let k = 1.0 + c;
                let e = (k * (self.xi0 - xi)).exp();
                Jet {
                    value: self.u_plus * (1.0 - e),
                    d1: self.u_plus * k * e,
                    d2: -self.u_plus * k * k * e,
                }
            }
            Side::Left => {
                let k = 1.0 - c;
                let e = (k * (xi - self.xi0)).exp();
                Jet {
                    value: self.u_minus * (1.0 - e),
                    d1: -self.u_minus * k * e,
                    d2: -self.u_minus * k * k * e,
                }
            }
        }
    }
}

/// Exact traveling shock `U_c(xi)`.
pub fn shock_profile(params: &ShockParams, xi: f64) -> f64 {
    let side = if xi > params.xi0 {
        Side::Right
    } else {
        Side::Left
    };
    params.jet(xi, side).value
}

/// `[U_c'']^+_-(xi0) + 2 |U_c'(xi0)|`, zero for the exact shock.
pub fn shock_jump_residual(params: &ShockParams) -> f64 {
    let right = params.jet(params.xi0, Side::Right);
    let left = params.jet(params.xi0, Side::Left);
    (right.d2 - left.d2) + 2.0 * right.d1.abs()
}

/// Residual of the traveling-wave ODE `-c U' = |U|' + U''` on the branch
/// containing `xi`.
pub fn shock_pde_residual(params: &ShockParams, xi: f64) -> f64 {
    let c = params.speed();
    let side = if xi > params.xi0 {
        Side::Right
    } else {
        Side::Left
    };
    let jet = params.jet(xi, side);
    let sign = if jet.value >= 0.0 { 1.0 } else { -1.0 };
    -c * jet.d1 - sign * jet.d1 - jet.d2
}

/// Gaussian-tailed initial profile glued to a quartic on `(0, 1)`, with the
/// quartic chosen so the interface conditions hold at `x = 0` and `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialProfile {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c_coef: f64,
}

pub fn build_initial_profile(alpha: f64) -> Result<InitialProfile> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let profile = InitialProfile {
        alpha,
        a: alpha * (10.0 * alpha + 1.0) / 7.0,
        b: -3.0 * alpha * (2.0 * alpha + 3.0) / 7.0,
        c_coef: -2.0 * alpha * (2.0 * alpha + 3.0) / 7.0,
    };
    profile.check_sign_regime()?;
    Ok(profile)
}

impl InitialProfile {
    fn quadratic(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c_coef
    }

    /// The inner branch is `x (1 - x) q(x)` with `q` convex (`a > 0`), so
    /// `q < 0` on `[0, 1]` iff it is negative at both endpoints.
    fn check_sign_regime(&self) -> Result<()> {
        let (q0, q1) = (self.quadratic(0.0), self.quadratic(1.0));
        if self.a <= 0.0 || q0 >= 0.0 || q1 >= 0.0 {
            return Err(Error::Domain(format!(
                "initial data is not negative on (0, 1) for alpha = {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Initial interface velocity `xi'(0) = 2 (alpha - 1)`.
    pub fn initial_velocity(&self) -> f64 {
        2.0 * (self.alpha - 1.0)
    }

    /// One-sided value and derivatives. `Left` uses the quartic branch and
    /// `Right` the Gaussian branch, whatever the position of `x`.
    pub fn jet(&self, x: f64, side: Side) -> Jet {
        match side {
            Side::Left => {
                // x(1-x)(a x^2 + b x + c) = -a x^4 + (a - b) x^3 + (b - c) x^2 + c x
                let (a, b, c) = (self.a, self.b, self.c_coef);
                let (p4, p3, p2, p1) = (-a, a - b, b - c, c);
                Jet {
                    value: ((p4 * x + p3) * x + p2) * x * x + p1 * x,
                    d1: ((4.0 * p4 * x + 3.0 * p3) * x + 2.0 * p2) * x + p1,
                    d2: (12.0 * p4 * x + 6.0 * p3) * x + 2.0 * p2,
                }
            }
            Side::Right => {
                let al = self.alpha;
                let e = (-al * (x * x - 1.0)).exp();
                Jet {
                    value: 1.0 - e,
                    d1: 2.0 * al * x * e,
                    d2: (2.0 * al - 4.0 * al * al * x * x) * e,
                }
            }
        }
    }
}

/// `u0(x)`; exactly zero at `x = 0` and `x = 1`.
pub fn eval_initial_data(profile: &InitialProfile, x: f64) -> f64 {
    if x <= 0.0 || x == 1.0 {
        0.0
    } else if x < 1.0 {
        profile.jet(x, Side::Left).value
    } else {
        profile.jet(x, Side::Right).value
    }
}

/// Upper bound on the extinction time, `T(alpha) = int_0^inf (1 - u0) dx`.
pub fn extinction_upper_bound(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let root = alpha.sqrt();
    let gaussian_tail = std::f64::consts::PI.sqrt() * erfcx(root) / (2.0 * root);
    Ok(gaussian_tail + 2.0 * alpha * alpha / 21.0 + 17.0 * alpha / 70.0 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn speed_examples() {
        assert_eq!(shock_speed(1.0, -1.0).unwrap(), 0.0);
        assert!(close(shock_speed(3.0, -1.0).unwrap(), -0.5, 1e-15));
        assert!(close(shock_speed(1.0, -3.0).unwrap(), 0.5, 1e-15));
    }

    #[test]
    fn speed_rejects_bad_signs() {
        assert!(matches!(shock_speed(1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(shock_speed(-1.0, -2.0), Err(Error::Domain(_))));
        assert!(shock_speed(0.0, -1.0).is_err());
        assert!(ShockParams::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = ShockParams::new(1.0, -1.0, 0.0).unwrap();
        assert_eq!(shock_profile(&p, 0.0), 0.0);
        assert!(close(shock_profile(&p, 60.0), 1.0, 1e-15));
        assert!(close(shock_profile(&p, -60.0), -1.0, 1e-15));
        assert!(close(shock_profile(&p, 1.0), 1.0 - (-1.0f64).exp(), 1e-15));
    }

    #[test]
    fn jump_residual_examples() {
        for (up, um, x0) in [(1.0, -1.0, 0.0), (3.0, -1.0, 0.0), (2.0, -1.0, 0.7)] {
            let p = ShockParams::new(up, um, x0).unwrap();
            assert!(shock_jump_residual(&p).abs() < 1e-14, "{up} {um} {x0}");
        }
    }

    #[test]
    fn profile_coefficients_alpha_one() {
        let p = build_initial_profile(1.0).unwrap();
        assert!(close(p.a, 11.0 / 7.0, 1e-15));
        assert!(close(p.b, -15.0 / 7.0, 1e-15));
        assert!(close(p.c_coef, -10.0 / 7.0, 1e-15));
    }

    #[test]
    fn profile_rejects_nonpositive_alpha() {
        assert!(build_initial_profile(0.0).is_err());
        assert!(build_initial_profile(-0.3).is_err());
        assert!(build_initial_profile(f64::NAN).is_err());
        assert!(extinction_upper_bound(0.0).is_err());
    }

    #[test]
    fn initial_velocity_value() {
        assert_eq!(build_initial_profile(1.5).unwrap().initial_velocity(), 1.0);
    }

    #[test]
    fn initial_data_examples() {
        for alpha in [0.1, 0.5, 1.0, 1.5] {
            let p = build_initial_profile(alpha).unwrap();
            assert_eq!(eval_initial_data(&p, 0.0), 0.0);
            assert_eq!(eval_initial_data(&p, 1.0), 0.0);
        }
        let p = build_initial_profile(1.0).unwrap();
        assert!(close(
            eval_initial_data(&p, 2.0),
            1.0 - (-3.0f64).exp(),
            1e-15
        ));
    }

    #[test]
    fn interface_conditions_of_initial_data() {
        for i in 1..=60 {
            let alpha = 0.05 * f64::from(i);
            let p = build_initial_profile(alpha).unwrap();
            let (l0, r0) = (p.jet(0.0, Side::Left), p.jet(1.0, Side::Left));
            let r1 = p.jet(1.0, Side::Right);
            // u0''(0) = u0'(0), continuity of u0' and the u0'' jump at x = 1
            assert!(close(l0.d2, l0.d1, 1e-12 * l0.d1.abs().max(1.0)));
            assert!(close(r0.d1, r1.d1, 1e-10 * r1.d1.abs()));
            let jump = r1.d2 - r0.d2;
            assert!(
                close(jump, -2.0 * r1.d1, 1e-10 * r1.d1.abs()),
                "alpha {alpha}"
            );
            assert!(close(2.0 * p.b, 3.0 * p.c_coef, 1e-14));
            assert!(close(p.a + p.b + p.c_coef, -2.0 * alpha, 1e-13));
            assert!(close(2.0 * p.a + p.b, 2.0 * alpha * alpha - alpha, 1e-13));
        }
    }

    #[test]
    fn inner_branch_is_negative() {
        for alpha in [0.1, 0.5, 1.5, 5.0, 40.0] {
            let p = build_initial_profile(alpha).unwrap();
            for k in 1..10_000 {
                let x = f64::from(k) / 10_000.0;
                assert!(eval_initial_data(&p, x) < 0.0, "alpha {alpha}, x {x}");
            }
        }
    }

    #[test]
    fn bound_reference_values() {
        assert!(close(extinction_upper_bound(1.5).unwrap(), 1.84859, 1e-5));
        assert!(close(extinction_upper_bound(0.5).unwrap(), 1.80092, 1e-5));
    }
}
