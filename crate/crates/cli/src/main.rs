use std::process::ExitCode;

use clap::Parser;
use modburgers_cli::args::{Cli, Command};
use modburgers_cli::commands::{analyze, render_summary, simulate, sweep, SweepStatus};
use modburgers_cli::CliError;

fn fail(err: CliError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(args) => match simulate(&args) {
            Ok(sidecar) => {
                println!(
                    "{} records, stop {:?}, wrote {}",
                    sidecar.run.records,
                    sidecar.run.stop,
                    args.out.display()
                );
                ExitCode::SUCCESS
            }
            Err(err) => fail(err),
        },
        Command::Analyze(args) => match analyze(&args) {
            Ok(report) => {
                for fit in &report.report.fits {
                    if let Some(scan) = &fit.scan {
                        println!(
                            "{:<14} t0 = {:.4}  c1 = {:.4}  (expected {})  error = {:.2e}",
                            format!("{:?}", fit.quantity),
                            scan.best.t0,
                            scan.best.c1,
                            fit.expected_exponent,
                            scan.best.error
                        );
                    }
                }
                ExitCode::SUCCESS
            }
            Err(err) => fail(err),
        },
        Command::Sweep(args) => match sweep(&args) {
            Ok(rows) => {
                print!("{}", render_summary(&rows));
                // failed cells are marked in the summary; the sweep itself still completed
                if rows.iter().all(|r| r.status == SweepStatus::Ok) {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(err) => fail(err),
        },
    }
}
