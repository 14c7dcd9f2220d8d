//! Batch front end for the `exvdw` library: configuration-driven distance
//! sweeps and the verification suite.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;
pub mod verify_suite;

use std::path::PathBuf;

use clap::Parser;

use crate::config::{Config, Mode};
use crate::error::CliError;
use crate::sweep::PointStatus;
use crate::verify_suite::SuiteReport;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "exvdw",
    version,
    about = "Dispersion potentials of excited atoms"
)]
pub struct Args {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output path, overriding the configuration.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Omit the timestamp line so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Suppress progress and summary messages.
    #[arg(long)]
    pub quiet: bool,
}

fn timestamp(args: &Args) -> Option<String> {
    (!args.no_timestamp)
        .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

/// Runs one configuration; the error carries the process exit code.
pub fn run(args: &Args) -> Result<(), CliError> {
    let mut cfg = Config::load(&args.config)?;
    if let Some(p) = &args.output {
        cfg.output.path = p.clone();
    }
    let resolved = cfg.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    let ts = timestamp(args);
    let path = resolved.output.path.clone();
    match resolved.mode {
        Mode::TwoAtom | Mode::CpSphere => {
            let rows = pool.install(|| sweep::run_sweep(&resolved));
            output::write_file(
                &path,
                &output::render_sweep(&resolved, &rows, ts.as_deref())?,
            )?;
            let bad: Vec<_> = rows
                .iter()
                .filter(|r| r.status != PointStatus::Ok)
                .collect();
            if !args.quiet {
                for row in &bad {
                    eprintln!("r = {:e}: {}", row.r, row.message.as_deref().unwrap_or(""));
                }
                eprintln!("wrote {} rows to {}", rows.len(), path.display());
            }
            if !bad.is_empty() {
                return Err(CliError::NonConvergence(format!(
                    "{} of {} points did not converge",
                    bad.len(),
                    rows.len()
                )));
            }
        }
        Mode::Verify => {
            let reports = pool.install(|| verify_suite::run_suite(&resolved));
            let all_passed = reports.iter().all(|r| r.passed());
            if !args.quiet {
                for r in &reports {
                    eprintln!(
                        "{:<20} {:?}  deviation {:e}  tolerance {:e}",
                        r.name, r.status, r.deviation, r.tolerance
                    );
                }
            }
            let suite = SuiteReport {
                generated: ts,
                all_passed,
                reports,
            };
            let mut text =
                serde_json::to_string_pretty(&suite).map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            output::write_file(&path, text.as_bytes())?;
            if !all_passed {
                return Err(CliError::NonConvergence("one or more checks failed".into()));
            }
        }
    }
    Ok(())
}
