//! Command-line front end for `snake-core`: flag and config resolution,
//! JSON/CSV documents, subcommands and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input validation,
//! 3 numerical failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod verify;

use std::io::Write;

pub use config::Cli;
use config::{Format, JobConfig, Subcommand};
pub use error::CliError;

/// Result of one invocation: text to emit, plus an optional verification
/// failure that still lets the text be written.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

/// Exactness defect above which `quadrature --verify` reports failure.
pub const QUADRATURE_VERIFY_TOL: f64 = 1e-9;

pub fn execute(job: &JobConfig) -> Result<Outcome, CliError> {
    match job.command {
        Subcommand::Build => commands::cmd_build(job).map(Outcome::ok),
        Subcommand::Entry => commands::cmd_entry(job).map(Outcome::ok),
        Subcommand::Expand => commands::cmd_expand(job).map(Outcome::ok),
        Subcommand::Bandwidth => commands::cmd_bandwidth(job).map(Outcome::ok),
        Subcommand::Quadrature => {
            let (text, defect) = commands::cmd_quadrature(job)?;
            let failure = defect.filter(|&d| d > QUADRATURE_VERIFY_TOL).map(|d| {
                CliError::Verification(format!(
                    "exactness defect {d:.1e} exceeds {QUADRATURE_VERIFY_TOL:.0e}"
                ))
            });
            Ok(Outcome { text, failure })
        }
        Subcommand::Verify => {
            let report = verify::run_suites(job, verify::seed_from_env()?)?;
            // The table always goes to stdout; --out receives the
            // machine-readable report in the chosen format.
            let text = if job.out.is_some() {
                println!("{}", report.to_table());
                report_document(&report, job)
            } else {
                report.to_table()
            };
            let failed = report.failures();
            let failure = (failed > 0)
                .then(|| CliError::Verification(format!("{failed} verification case(s) failed")));
            Ok(Outcome { text, failure })
        }
    }
}

fn report_document(report: &verify::Report, job: &JobConfig) -> String {
    match job.format {
        Format::Json => formats::to_json(report, job.precision),
        Format::Csv => {
            let mut out = String::from("suite,case,status,detail");
            for c in &report.cases {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let detail = c.detail.replace('"', "\"\"");
                out += &format!("\n{},{},{status},\"{detail}\"", c.suite, c.case);
            }
            out
        }
    }
}

/// Resolves, executes and writes the output; returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = JobConfig::resolve(cli).and_then(|job| {
        let outcome = execute(&job)?;
        emit(&job, &outcome.text)?;
        Ok(outcome.failure)
    });
    match result {
        Ok(None) => 0,
        Ok(Some(e)) | Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(job: &JobConfig, text: &str) -> Result<(), CliError> {
    match &job.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")
                .map_err(|e| CliError::Validation(format!("cannot write to stdout: {e}")))
        }
    }
}
