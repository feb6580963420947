//! Extinction-time and power-law estimation.
//!
//! For a candidate extinction time `t0` the samples are fitted as
//! `log q = c1 log(t0 - t) + c2` by ordinary least squares. Scanning `t0` over
//! a grid and keeping the candidate with the smallest mean squared residual
//! gives both the extinction time and the exponent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::TraceRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PowerFit {
    pub t0: f64,
    /// Exponent.
    pub c1: f64,
    /// Log-intercept.
    pub c2: f64,
    /// Mean squared residual in log-log space.
    pub error: f64,
}

/// Which samples enter the regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "fraction", rename_all = "camelCase")]
pub enum Window {
    All,
    /// Samples after the maximum of the fitted quantity whose value is below
    /// `fraction * max`.
    BelowFractionOfMax(f64),
    /// The last `fraction` of the samples.
    TrailingFraction(f64),
}

impl Window {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Window::All => Ok(()),
            Window::BelowFractionOfMax(f) | Window::TrailingFraction(f) if f > 0.0 && f <= 1.0 => {
                Ok(())
            }
            Window::BelowFractionOfMax(f) | Window::TrailingFraction(f) => Err(Error::Config(
                format!("window fraction must lie in (0, 1], got {f}"),
            )),
        }
    }

    /// Indices of the selected entries of `values`, in order.
    pub fn select(&self, values: &[f64]) -> Vec<usize> {
        match *self {
            Window::All => (0..values.len()).collect(),
            Window::TrailingFraction(f) => {
                let keep = ((values.len() as f64) * f).ceil() as usize;
                (values.len().saturating_sub(keep)..values.len()).collect()
            }
            Window::BelowFractionOfMax(f) => {
                let Some((peak, max)) = values
                    .iter()
                    .copied()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                else {
                    return Vec::new();
                };
                (peak..values.len())
                    .filter(|&i| values[i] < f * max)
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitConfig {
    pub t0_min: f64,
    pub t0_max: f64,
    pub t0_step: f64,
    pub window: Window,
}

pub const DEFAULT_T0_STEP: f64 = 1e-4;
pub const DEFAULT_T0_SPAN: f64 = 0.2;
pub const DEFAULT_WINDOW: Window = Window::BelowFractionOfMax(0.8);

impl FitConfig {
    /// Scan `[t_last + offset, t_last + 0.2]` in steps of `1e-4`.
    pub fn after_last_sample(t_last: f64, offset: f64) -> Self {
        Self {
            t0_min: t_last + offset,
            t0_max: t_last + DEFAULT_T0_SPAN,
            t0_step: DEFAULT_T0_STEP,
            window: DEFAULT_WINDOW,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0_step > 0.0 && self.t0_step.is_finite()) {
            return Err(Error::Config(format!(
                "t0 step must be positive, got {}",
                self.t0_step
            )));
        }
        if !(self.t0_max >= self.t0_min) {
            return Err(Error::Config(format!(
                "empty t0 range [{}, {}]",
                self.t0_min, self.t0_max
            )));
        }
        self.window.validate()
    }

    /// `t0_min + k t0_step` for `k = 0 ..= K`, `K = floor((max - min) / step)`.
    pub fn candidates(&self) -> Vec<f64> {
        let count = ((self.t0_max - self.t0_min) / self.t0_step + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| self.t0_min + k as f64 * self.t0_step)
            .collect()
    }
}

/// Least-squares fit of `log q` against `log(t0 - t)`.
pub fn loglog_fit(samples: &[(f64, f64)], t0: f64) -> Result<PowerFit> {
    if samples.len() < 3 {
        return Err(Error::DegenerateFit {
            count: samples.len(),
        });
    }
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &(t, q) in samples {
        if !(q > 0.0) {
            return Err(Error::Domain(format!(
                "sample at t = {t} is not positive (q = {q})"
            )));
        }
        if !(t < t0) {
            return Err(Error::Domain(format!(
                "sample time {t} is not before t0 = {t0}"
            )));
        }
        xs.push((t0 - t).ln());
        ys.push(q.ln());
    }
    let count = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / count;
    let y_mean = ys.iter().sum::<f64>() / count;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit { count: 1 });
    }
    let c1 = sxy / sxx;
    let c2 = y_mean - c1 * x_mean;
    let error = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (c1 * x + c2);
            r * r
        })
        .sum::<f64>()
        / count;
    Ok(PowerFit { t0, c1, c2, error })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Scan {
    pub best: PowerFit,
    /// One fit per candidate, in increasing `t0`.
    pub all: Vec<PowerFit>,
}

/// Applies the window, then fits every candidate `t0` and keeps the one with
/// the smallest error. Fails if that minimum sits on either end of the grid.
pub fn scan_t0(samples: &[(f64, f64)], config: &FitConfig) -> Result<Scan> {
    config.validate()?;
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let selected: Vec<(f64, f64)> = config
        .window
        .select(&values)
        .into_iter()
        .map(|i| samples[i])
        .collect();
    scan_selected(&selected, config)
}

fn scan_selected(samples: &[(f64, f64)], config: &FitConfig) -> Result<Scan> {
    let Some(t_last) = samples.iter().map(|s| s.0).reduce(f64::max) else {
        return Err(Error::DegenerateFit { count: 0 });
    };
    if !(config.t0_min > t_last) {
        return Err(Error::Config(format!(
            "t0_min = {} must exceed the last sample time {t_last}",
            config.t0_min
        )));
    }
    let all = config
        .candidates()
        .into_iter()
        .map(|t0| loglog_fit(samples, t0))
        .collect::<Result<Vec<_>>>()?;
    let (index, best) = all
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.error.total_cmp(&b.1.error))
        .map(|(i, f)| (i, *f))
        .expect("candidate grid is never empty");
    if all.len() > 1 && (index == 0 || index + 1 == all.len()) {
        let edge = if index == 0 { "lower" } else { "upper" };
        return Err(Error::ScanBoundary { t0: best.t0, edge });
    }
    Ok(Scan { best, all })
}

/// Quantities fitted by [`extinction_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Quantity {
    Xi,
    Ux,
    UxxLeft,
    MassRegion,
    EnergyRegion,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::Xi,
        Quantity::Ux,
        Quantity::UxxLeft,
        Quantity::MassRegion,
        Quantity::EnergyRegion,
    ];

    /// Exponent predicted by the extinction scaling law.
    pub fn expected_exponent(self) -> f64 {
        match self {
            Quantity::Xi | Quantity::UxxLeft => 0.5,
            Quantity::Ux => 1.0,
            Quantity::MassRegion => 2.0,
            Quantity::EnergyRegion => 3.5,
        }
    }

    /// Value fitted for a record: `|M|` for the (negative) region mass, and
    /// `None` for nonpositive `u_xx` samples, which are dropped.
    pub fn sample(self, r: &TraceRecord) -> Option<f64> {
        let q = match self {
            Quantity::Xi => r.xi,
            Quantity::Ux => r.ux,
            Quantity::UxxLeft => r.uxx_left,
            Quantity::MassRegion => r.mass_region.abs(),
            Quantity::EnergyRegion => r.energy_region,
        };
        (q > 0.0).then_some(q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuantityFit {
    pub quantity: Quantity,
    pub expected_exponent: f64,
    pub samples: usize,
    pub scan: Option<Scan>,
    pub error: Option<String>,
}

/// `xi' ~ -(t0 - t)^(c1 - 1)` implied by the interface fit, and a direct fit
/// of `|xi'|` at the same `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VelocityDivergence {
    pub t0: f64,
    pub implied_exponent: f64,
    pub direct_fit: Option<PowerFit>,
    pub diverges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtinctionReport {
    pub window_start: f64,
    pub window_end: f64,
    pub records_in_window: usize,
    pub fits: Vec<QuantityFit>,
    pub velocity: Option<VelocityDivergence>,
}

impl ExtinctionReport {
    pub fn fit(&self, quantity: Quantity) -> Option<&PowerFit> {
        self.fits
            .iter()
            .find(|f| f.quantity == quantity)?
            .scan
            .as_ref()
            .map(|s| &s.best)
    }

    pub fn all_succeeded(&self) -> bool {
        self.fits.iter().all(|f| f.scan.is_some())
    }
}

/// Fits every quantity of [`Quantity::ALL`] over one common time window.
///
/// The window is chosen on the interface trajectory `xi(t)` by
/// `config.window` and applied to every quantity, so all exponents refer to
/// the same stretch of the run. Failures are recorded per quantity.
pub fn extinction_report(trace: &[TraceRecord], config: &FitConfig) -> Result<ExtinctionReport> {
    config.validate()?;
    let xi: Vec<f64> = trace.iter().map(|r| r.xi).collect();
    let window: Vec<&TraceRecord> = config
        .window
        .select(&xi)
        .into_iter()
        .map(|i| &trace[i])
        .collect();
    let (window_start, window_end) = match (window.first(), window.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => (f64::NAN, f64::NAN),
    };

    let fits = Quantity::ALL
        .iter()
        .map(|&quantity| {
            let samples: Vec<(f64, f64)> = window
                .iter()
                .filter_map(|r| quantity.sample(r).map(|q| (r.t, q)))
                .collect();
            let outcome = scan_selected(&samples, config);
            QuantityFit {
                quantity,
                expected_exponent: quantity.expected_exponent(),
                samples: samples.len(),
                error: outcome.as_ref().err().map(ToString::to_string),
                scan: outcome.ok(),
            }
        })
        .collect::<Vec<_>>();

    let velocity = fits
        .iter()
        .find(|f| f.quantity == Quantity::Xi)
        .and_then(|f| f.scan.as_ref())
        .map(|scan| {
            let t0 = scan.best.t0;
            let speeds: Vec<(f64, f64)> = window
                .iter()
                .filter(|r| r.xi_prime < 0.0)
                .map(|r| (r.t, -r.xi_prime))
                .collect();
            let implied_exponent = scan.best.c1 - 1.0;
            VelocityDivergence {
                t0,
                implied_exponent,
                direct_fit: loglog_fit(&speeds, t0).ok(),
                diverges: implied_exponent < 0.0,
            }
        });

    Ok(ExtinctionReport {
        window_start,
        window_end,
        records_in_window: window.len(),
        fits,
        velocity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_samples(t0: f64, p: f64, scale: f64, t_max: f64, n: usize) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| {
                let t = t_max * i as f64 / n as f64;
                (t, scale * (t0 - t).powf(p))
            })
            .collect()
    }

    #[test]
    fn exact_square_root() {
        let s = power_samples(0.2, 0.5, 1.0, 0.19, 50);
        let f = loglog_fit(&s, 0.2).unwrap();
        assert!((f.c1 - 0.5).abs() < 1e-12);
        assert!(f.c2.abs() < 1e-12);
        assert!(f.error < 1e-25);
    }

    #[test]
    fn exact_linear_with_scale() {
        let s = power_samples(0.2, 1.0, 3.0, 0.19, 50);
        let f = loglog_fit(&s, 0.2).unwrap();
        assert!((f.c1 - 1.0).abs() < 1e-12);
        assert!((f.c2 - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn wrong_t0_has_larger_error() {
        let s = power_samples(0.2, 0.5, 1.0, 0.19, 50);
        let right = loglog_fit(&s, 0.2).unwrap();
        let wrong = loglog_fit(&s, 0.25).unwrap();
        assert!(wrong.error > right.error);
        assert!(wrong.error > 1e-6);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(
            loglog_fit(&[(0.0, 1.0), (0.1, 1.0)], 1.0),
            Err(Error::DegenerateFit { count: 2 })
        ));
        assert!(matches!(
            loglog_fit(&[(0.0, 1.0), (0.1, -1.0), (0.2, 1.0)], 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            loglog_fit(&[(0.0, 1.0), (0.1, 1.0), (1.2, 1.0)], 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn scan_recovers_synthetic_law() {
        let mut config = FitConfig::after_last_sample(0.15, 1e-4);
        config.window = Window::All;
        let t0 = config.candidates()[300];
        let s = power_samples(t0, 0.5, 2.0, 0.15, 80);
        let scan = scan_t0(&s, &config).unwrap();
        assert_eq!(scan.best.t0, t0);
        assert!((scan.best.c1 - 0.5).abs() < 1e-6);
        assert_eq!(scan.all.len(), config.candidates().len());
    }

    #[test]
    fn scan_flags_boundary_minimum() {
        let s = power_samples(0.2, 0.5, 1.0, 0.15, 40);
        let config = FitConfig {
            t0_min: 0.21,
            t0_max: 0.3,
            t0_step: 1e-3,
            window: Window::All,
        };
        assert!(matches!(
            scan_t0(&s, &config),
            Err(Error::ScanBoundary { edge: "lower", .. })
        ));
    }

    #[test]
    fn scan_rejects_range_before_samples() {
        let s = power_samples(0.2, 0.5, 1.0, 0.15, 40);
        let config = FitConfig {
            t0_min: 0.1,
            t0_max: 0.3,
            t0_step: 1e-3,
            window: Window::All,
        };
        assert!(matches!(scan_t0(&s, &config), Err(Error::Config(_))));
    }

    #[test]
    fn windows() {
        let v = [1.0, 2.0, 1.5, 1.2, 0.9, 0.5];
        assert_eq!(Window::All.select(&v), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(Window::TrailingFraction(0.5).select(&v), vec![3, 4, 5]);
        assert_eq!(Window::BelowFractionOfMax(0.8).select(&v), vec![2, 3, 4, 5]);
        assert_eq!(Window::BelowFractionOfMax(0.5).select(&v), vec![4, 5]);
        assert!(Window::TrailingFraction(0.0).validate().is_err());
    }
}
