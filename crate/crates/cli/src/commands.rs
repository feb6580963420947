use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use modburgers::model::extinction_upper_bound;
use modburgers::scaling::{extinction_report, ExtinctionReport, Quantity, DEFAULT_T0_STEP};
use modburgers::solver::run;
use modburgers::{FitConfig, SimConfig, TraceRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{AnalyzeArgs, FitFlags, RunFlags, SimulateArgs, SweepArgs};
use crate::error::{io_error, CliError, Result};
use crate::manifest::{
    read_manifest, write_json, Outputs, RunManifest, RunSummary, Sidecar, DETERMINISM,
    SCHEMA_VERSION,
};
use crate::trace_csv::{format_float, read_trace, write_trace};

/// Report written by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub schema_version: u32,
    /// File name of the analysed trace.
    pub trace: String,
    pub fit: FitConfig,
    #[serde(flatten)]
    pub report: ExtinctionReport,
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(io_error(dir)),
        _ => Ok(()),
    }
}

pub fn sidecar_path(trace: &Path) -> PathBuf {
    trace.with_extension("json")
}

/// Flags over manifest over defaults.
pub fn resolve_config(alpha: Option<f64>, flags: &RunFlags) -> Result<SimConfig> {
    let mut config = match &flags.config {
        Some(path) => read_manifest(path)?.config,
        None => SimConfig::with_alpha(alpha.ok_or_else(|| {
            CliError::Config("--alpha is required unless --config is given".into())
        })?),
    };
    if let Some(a) = alpha {
        config.alpha = a;
    }
    config.domain_length = flags.length.unwrap_or(config.domain_length);
    config.step = flags.step.unwrap_or(config.step);
    config.dt = flags.dt.unwrap_or(config.dt);
    config.t_end = flags.t_end.unwrap_or(config.t_end);
    config.xi_stop = flags.xi_stop.unwrap_or(config.xi_stop);
    config.output_every = flags.output_every.unwrap_or(config.output_every);
    config
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(config)
}

/// Default scan `[t_last + 1e-4, t_last + 0.2]`, then the flags.
pub fn resolve_fit(records: &[TraceRecord], flags: &FitFlags) -> Result<FitConfig> {
    let t_last = records.last().map_or(0.0, |r| r.t);
    let mut fit = FitConfig::after_last_sample(t_last, DEFAULT_T0_STEP);
    fit.t0_min = flags.t0_min.unwrap_or(fit.t0_min);
    fit.t0_max = flags.t0_max.unwrap_or(fit.t0_max);
    fit.t0_step = flags.t0_step.unwrap_or(fit.t0_step);
    fit.window = flags.window.unwrap_or(fit.window);
    fit.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(fit)
}

/// Runs `config` and writes the trace and its sidecar. Both files are
/// written even when the run produced no record.
pub fn simulate_to(config: &SimConfig, trace_path: &Path) -> Result<Sidecar> {
    let trace = run(config).map_err(|e| CliError::Config(e.to_string()))?;
    let last = trace.records.last();
    let sidecar_path = sidecar_path(trace_path);
    let sidecar = Sidecar {
        manifest: RunManifest {
            schema_version: SCHEMA_VERSION,
            config: *config,
            fit: resolve_fit(&trace.records, &FitFlags::default())?,
            determinism: DETERMINISM.into(),
            outputs: Outputs {
                trace: file_name(trace_path),
                sidecar: file_name(&sidecar_path),
            },
        },
        run: RunSummary {
            stop: trace.stop.clone(),
            steps: trace.steps,
            records: trace.records.len(),
            sign_warnings: trace.sign_warnings,
            final_time: last.map(|r| r.t),
            final_xi: last.map(|r| r.xi),
        },
    };
    ensure_parent(trace_path)?;
    write_trace(trace_path, &trace.records)?;
    write_json(&sidecar_path, &sidecar)?;

    if trace.records.is_empty() {
        return Err(CliError::NoOutput(format!(
            "alpha = {}: {:?}",
            config.alpha, trace.stop
        )));
    }
    if trace.sign_warnings > 0 {
        warn!(
            "alpha = {}: sign regime violated on {} step(s)",
            config.alpha, trace.sign_warnings
        );
    }
    info!(
        "alpha = {}: {} steps, stop {:?}, xi = {:.6} at t = {:.6}",
        config.alpha,
        trace.steps,
        trace.stop,
        sidecar.run.final_xi.unwrap_or(f64::NAN),
        sidecar.run.final_time.unwrap_or(f64::NAN)
    );
    Ok(sidecar)
}

pub fn simulate(args: &SimulateArgs) -> Result<Sidecar> {
    let config = resolve_config(args.alpha, &args.run)?;
    simulate_to(&config, &args.out)
}

fn failure_summary(report: &ExtinctionReport) -> Option<String> {
    let failures: Vec<String> = report
        .fits
        .iter()
        .filter_map(|f| f.error.as_ref().map(|e| format!("{:?}: {e}", f.quantity)))
        .collect();
    if failures.is_empty() {
        return None;
    }
    let mut message = failures.join("; ");
    if message.contains("edge of the scan grid") {
        message.push_str(" (adjust --t0-min / --t0-max)");
    }
    Some(message)
}

/// Fits the trace at `trace_path` and writes the report, also when some
/// quantity could not be fitted. Those failures come back as the message.
pub fn analyze_to(
    trace_path: &Path,
    flags: &FitFlags,
    out: &Path,
) -> Result<(AnalysisReport, Option<String>)> {
    let records = read_trace(trace_path)?;
    if records.is_empty() {
        return Err(CliError::Trace {
            path: trace_path.to_path_buf(),
            message: "no records".into(),
        });
    }
    let fit = resolve_fit(&records, flags)?;
    let report =
        extinction_report(&records, &fit).map_err(|e| CliError::Analysis(e.to_string()))?;
    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        trace: file_name(trace_path),
        fit,
        report,
    };
    ensure_parent(out)?;
    write_json(out, &report)?;
    let failures = failure_summary(&report.report);
    Ok((report, failures))
}

/// Like [`analyze_to`], but any failed quantity is an error.
pub fn analyze(args: &AnalyzeArgs) -> Result<AnalysisReport> {
    match analyze_to(&args.trace, &args.fit, &args.out)? {
        (report, None) => Ok(report),
        (_, Some(message)) => Err(CliError::Analysis(message)),
    }
}

/// One row of the sweep summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub status: SweepStatus,
    /// What went wrong, empty on success.
    pub message: String,
    pub t0: Option<f64>,
    pub exponents: [Option<f64>; 5],
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    Ok,
    /// The run finished but some quantity could not be fitted.
    Partial,
    Failed,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepStatus::Ok => "ok",
            SweepStatus::Partial => "partial",
            SweepStatus::Failed => "failed",
        }
    }
}

impl SweepRow {
    pub const HEADER: [&'static str; 11] = [
        "alpha",
        "status",
        "t0",
        "c1_xi",
        "c1_ux",
        "c1_uxx_left",
        "c1_mass_region",
        "c1_energy_region",
        "extinction_bound",
        "bound_slack",
        "message",
    ];

    /// `T(alpha) - t0`; positive when the fitted extinction time respects
    /// the analytic bound.
    pub fn bound_slack(&self) -> Option<f64> {
        Some(self.bound? - self.t0?)
    }

    fn fields(&self) -> Vec<String> {
        let cell = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        let mut fields = vec![
            self.alpha.to_string(),
            self.status.as_str().into(),
            cell(self.t0),
        ];
        fields.extend(self.exponents.iter().map(|&v| cell(v)));
        fields.push(cell(self.bound));
        fields.push(cell(self.bound_slack()));
        fields.push(self.message.clone());
        fields
    }
}

pub fn sweep_stem(alpha: f64) -> String {
    format!("alpha-{alpha}")
}

fn sweep_one(alpha: f64, args: &SweepArgs) -> SweepRow {
    let bound = extinction_upper_bound(alpha).ok();
    let outcome = (|| {
        let config = resolve_config(Some(alpha), &args.run)?;
        let stem = sweep_stem(alpha);
        let trace = args.out_dir.join(format!("{stem}.csv"));
        simulate_to(&config, &trace)?;
        analyze_to(
            &trace,
            &args.fit,
            &args.out_dir.join(format!("{stem}.report.json")),
        )
    })();
    match outcome {
        Ok((report, failures)) => {
            if let Some(message) = &failures {
                warn!("alpha = {alpha}: {message}");
            }
            SweepRow {
                alpha,
                status: if failures.is_some() {
                    SweepStatus::Partial
                } else {
                    SweepStatus::Ok
                },
                message: failures.unwrap_or_default(),
                t0: report.report.fit(Quantity::Xi).map(|f| f.t0),
                exponents: Quantity::ALL.map(|q| report.report.fit(q).map(|f| f.c1)),
                bound,
            }
        }
        Err(err) => {
            warn!("alpha = {alpha}: {err}");
            SweepRow {
                alpha,
                status: SweepStatus::Failed,
                message: err.to_string(),
                t0: None,
                exponents: [None; 5],
                bound,
            }
        }
    }
}

/// Runs every alpha on the rayon pool and writes `summary.csv`. Rows keep
/// the order of `alpha_list`.
pub fn sweep(args: &SweepArgs) -> Result<Vec<SweepRow>> {
    fs::create_dir_all(&args.out_dir).map_err(io_error(&args.out_dir))?;
    let rows: Vec<SweepRow> = args
        .alpha_list
        .par_iter()
        .map(|&alpha| sweep_one(alpha, args))
        .collect();

    let path = args.out_dir.join("summary.csv");
    let file = fs::File::create(&path).map_err(io_error(&path))?;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    let to_io = |e: csv::Error| CliError::Io {
        path: path.clone(),
        source: e.into(),
    };
    writer.write_record(SweepRow::HEADER).map_err(to_io)?;
    for row in &rows {
        writer.write_record(row.fields()).map_err(to_io)?;
    }
    writer.flush().map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(rows)
}

/// Fixed-width table of the summary for the terminal.
pub fn render_summary(rows: &[SweepRow]) -> String {
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    let mut out = format!(
        "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  status\n",
        "alpha", "t0", "xi", "u_x", "u_xx", "|M|", "E", "T(a)", "slack"
    );
    for row in rows {
        out.push_str(&format!("{:>6}", row.alpha));
        for v in [row.t0]
            .into_iter()
            .chain(row.exponents)
            .chain([row.bound, row.bound_slack()])
        {
            out.push_str(&format!(" {:>8}", cell(v)));
        }
        out.push_str(&format!("  {}\n", row.status.as_str()));
    }
    out
}
