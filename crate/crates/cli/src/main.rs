//! `lebesgue`: command-line front end to the summability laboratory.
//!
//! Exit status is 0 on success (and on passing or converging verdicts),
//! 1 when a verdict fails or a computation cannot be completed, and 2 on
//! any usage error: bad flags, unknown function, malformed grid, invalid
//! config, or an output path that cannot be written.

mod config;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;
use lebesgue_core::corpus;
use lebesgue_core::error::LabError;
use lebesgue_core::functionals::{verify_lemma2, verify_lemma3, verify_lemmas};
use lebesgue_core::harness::{abelian_sweep, default_t_seq, tauberian_check};
use lebesgue_core::summability::{lebesgue_mean, mean_minus_partial, partial_integral};

use config::{Check, Cli, Job, Resolved};
use output::{DiffOutput, MeanOutput, PartialOutput, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] LabError),
    #[error("cannot write {path}: {reason}")]
    Output { path: String, reason: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Output { .. } => 2,
            CliError::Compute(e) => match e {
                LabError::UnknownFunction { .. }
                | LabError::BadGridSpec { .. }
                | LabError::InvalidParameter { .. }
                | LabError::InvalidInterval { .. }
                | LabError::GridTooSmall { .. } => 2,
                _ => 1,
            },
        }
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn execute(r: &Resolved) -> Result<Report, CliError> {
    let tol = r.tol;
    let report = match &r.job {
        Job::CorpusList => Report::Corpus(corpus::list()),
        Job::Conditions {
            function,
            t_grid,
            t1,
        } => {
            let f = corpus::get(function)?;
            Report::Conditions(verify_lemmas(&f, &t_grid.points(), *t1, tol)?)
        }
        Job::Partial { function, x, t } => {
            let f = corpus::get(function)?;
            Report::Partial(PartialOutput {
                function: function.clone(),
                x: *x,
                t: *t,
                result: partial_integral(&f, *x, *t, tol)?,
            })
        }
        Job::Mean { function, x, h } => {
            let f = corpus::get(function)?;
            Report::Mean(MeanOutput {
                function: function.clone(),
                x: *x,
                h: *h,
                result: lebesgue_mean(&f, *x, *h, 0.5 * tol, 0.5 * tol)?,
            })
        }
        Job::Diff { function, x, h } => {
            let f = corpus::get(function)?;
            Report::Diff(DiffOutput {
                function: function.clone(),
                x: *x,
                h: *h,
                result: mean_minus_partial(&f, *x, *h, 0.5 * tol, 0.5 * tol)?,
            })
        }
        Job::Theorem2 {
            function,
            x_grid,
            h_seq,
        } => {
            let f = corpus::get(function)?;
            Report::Sweep(abelian_sweep(&f, &x_grid.points(), &h_seq.points(), tol)?)
        }
        Job::Theorem3 {
            function,
            x0,
            t_grid,
            h_seq,
        } => {
            let f = corpus::get(function)?;
            let t_seq = t_grid.map_or_else(|| default_t_seq(*x0), |g| g.points());
            Report::Convergence(tauberian_check(&f, *x0, &t_seq, &h_seq.points(), tol)?)
        }
        Job::Lemma {
            check,
            function,
            t_grid,
            t1,
        } => {
            let f = corpus::get(function)?;
            let grid = t_grid.points();
            let report = match check {
                Check::Lemma2 => verify_lemma2(&f, &grid, tol)?,
                _ => verify_lemma3(&f, *t1, &grid, tol)?,
            };
            Report::Lemma(*check, report)
        }
    };
    Ok(report)
}

fn run_parsed(cli: &Cli) -> Result<bool, CliError> {
    let resolved = Resolved::from_cli(cli)?;
    if let Some(path) = &cli.dump_config {
        write_file(path, &resolved.to_config().to_toml())?;
    }
    let report = execute(&resolved)?;
    let text = report.render(resolved.format);
    match &resolved.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_parsed(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
