//! Command-line grammar, the flat config file, and their merge into a job.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lebesgue_core::functionals::DEFAULT_T1;
use lebesgue_core::grid::GridSpec;
use lebesgue_core::harness::default_tauberian_h_grid;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Theorem2,
    Theorem3,
    Lemma2,
    Lemma3,
}

impl Check {
    fn as_str(self) -> &'static str {
        match self {
            Check::Theorem2 => "theorem2",
            Check::Theorem3 => "theorem3",
            Check::Lemma2 => "lemma2",
            Check::Lemma3 => "lemma3",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lebesgue",
    version,
    about = "Summability laboratory for trigonometric integrals"
)]
pub struct Cli {
    /// Absolute tolerance for quadrature and tail truncation [default: 1e-8]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output format [default: table]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with the same keys as the flags; flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the fully resolved configuration to this path, then run
    #[arg(long = "dump-config", global = true)]
    pub dump_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the built-in test functions
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Weighted mass M(T) and tail functional Q(T) over a grid
    Conditions {
        #[arg(long)]
        function: Option<String>,
        #[arg(long = "t-grid")]
        t_grid: Option<GridSpec>,
        #[arg(long)]
        t1: Option<f64>,
    },
    /// Partial integral I_T(x)
    Partial {
        #[arg(long)]
        function: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long = "T")]
        t: Option<f64>,
    },
    /// Sinc-kernel mean at (x, h)
    Mean(PointArgs),
    /// Mean minus the partial integral at T = 1/h
    Diff(PointArgs),
    /// Run a theorem or lemma check
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    List,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    function: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long)]
    function: Option<String>,
    #[arg(long = "x-grid")]
    x_grid: Option<GridSpec>,
    #[arg(long = "h-seq")]
    h_seq: Option<GridSpec>,
    #[arg(long = "t-grid")]
    t_grid: Option<GridSpec>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
}

/// Flat key-value configuration. Keys match the long flag names; `command`
/// holds the subcommand path, e.g. `"verify theorem2"`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_seq: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    /// Values from `self`, falling back to `other` key by key.
    fn or(self, other: RunConfig) -> RunConfig {
        RunConfig {
            command: self.command.or(other.command),
            function: self.function.or(other.function),
            t_grid: self.t_grid.or(other.t_grid),
            t1: self.t1.or(other.t1),
            x: self.x.or(other.x),
            t: self.t.or(other.t),
            h: self.h.or(other.h),
            x_grid: self.x_grid.or(other.x_grid),
            h_seq: self.h_seq.or(other.h_seq),
            x0: self.x0.or(other.x0),
            tol: self.tol.or(other.tol),
            format: self.format.or(other.format),
            out: self.out.or(other.out),
        }
    }
}

impl Cli {
    /// Everything given on the command line, as config keys.
    fn to_config(&self) -> RunConfig {
        let mut c = RunConfig {
            tol: self.tol,
            format: self.format,
            out: self.out.clone(),
            ..RunConfig::default()
        };
        match &self.command {
            None => {}
            Some(Command::Corpus {
                action: CorpusAction::List,
            }) => {
                c.command = Some("corpus list".into());
            }
            Some(Command::Conditions {
                function,
                t_grid,
                t1,
            }) => {
                c.command = Some("conditions".into());
                c.function = function.clone();
                c.t_grid = *t_grid;
                c.t1 = *t1;
            }
            Some(Command::Partial { function, x, t }) => {
                c.command = Some("partial".into());
                c.function = function.clone();
                c.x = *x;
                c.t = *t;
            }
            Some(Command::Mean(p)) | Some(Command::Diff(p)) => {
                let name = if matches!(self.command, Some(Command::Mean(_))) {
                    "mean"
                } else {
                    "diff"
                };
                c.command = Some(name.into());
                c.function = p.function.clone();
                c.x = p.x;
                c.h = p.h;
            }
            Some(Command::Verify(v)) => {
                c.command = Some(format!("verify {}", v.check.as_str()));
                c.function = v.function.clone();
                c.x_grid = v.x_grid;
                c.h_seq = v.h_seq;
                c.t_grid = v.t_grid;
                c.x0 = v.x0;
                c.t1 = v.t1;
            }
        }
        c
    }
}

/// A fully resolved command with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    CorpusList,
    Conditions {
        function: String,
        t_grid: GridSpec,
        t1: f64,
    },
    Partial {
        function: String,
        x: f64,
        t: f64,
    },
    Mean {
        function: String,
        x: f64,
        h: f64,
    },
    Diff {
        function: String,
        x: f64,
        h: f64,
    },
    Theorem2 {
        function: String,
        x_grid: GridSpec,
        h_seq: GridSpec,
    },
    Theorem3 {
        function: String,
        x0: f64,
        t_grid: Option<GridSpec>,
        h_seq: GridSpec,
    },
    Lemma {
        check: Check,
        function: String,
        t_grid: GridSpec,
        t1: f64,
    },
}

/// Job plus global settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub job: Job,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub fn default_lemma_grid() -> GridSpec {
    GridSpec::Geometric {
        start: 1.0,
        end: 1e4,
        n: 40,
    }
}

pub fn default_x_grid() -> GridSpec {
    GridSpec::Linear {
        start: -10.0,
        end: 10.0,
        n: 41,
    }
}

pub fn default_h_seq() -> GridSpec {
    GridSpec::Geometric {
        start: 1.0,
        end: 1e-3,
        n: 4,
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

impl Resolved {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Self::from_config(cli.to_config().or(file))
    }

    pub fn from_config(c: RunConfig) -> Result<Self, CliError> {
        let command = require(c.command.clone(), "command (subcommand)")?;
        let function = || require(c.function.clone(), "function");
        let job = match command.as_str() {
            "corpus list" => Job::CorpusList,
            "conditions" => Job::Conditions {
                function: function()?,
                t_grid: require(c.t_grid, "t-grid")?,
                t1: c.t1.unwrap_or(DEFAULT_T1),
            },
            "partial" => Job::Partial {
                function: function()?,
                x: require(c.x, "x")?,
                t: require(c.t, "T")?,
            },
            "mean" => Job::Mean {
                function: function()?,
                x: require(c.x, "x")?,
                h: require(c.h, "h")?,
            },
            "diff" => Job::Diff {
                function: function()?,
                x: require(c.x, "x")?,
                h: require(c.h, "h")?,
            },
            "verify theorem2" => Job::Theorem2 {
                function: function()?,
                x_grid: c.x_grid.unwrap_or_else(default_x_grid),
                h_seq: c.h_seq.unwrap_or_else(default_h_seq),
            },
            "verify theorem3" => {
                let x0 = c.x0.unwrap_or(1.0);
                Job::Theorem3 {
                    function: function()?,
                    x0,
                    t_grid: c.t_grid,
                    h_seq: c.h_seq.unwrap_or_else(|| default_tauberian_h_grid(x0)),
                }
            }
            "verify lemma2" | "verify lemma3" => Job::Lemma {
                check: if command.ends_with('2') {
                    Check::Lemma2
                } else {
                    Check::Lemma3
                },
                function: function()?,
                t_grid: c.t_grid.unwrap_or_else(default_lemma_grid),
                t1: c.t1.unwrap_or(DEFAULT_T1),
            },
            other => return Err(CliError::Usage(format!("unknown command '{other}'"))),
        };
        let tol = c.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!(
                "--tol must be positive and finite, got {tol}"
            )));
        }
        Ok(Resolved {
            job,
            tol,
            format: c.format.unwrap_or(Format::Table),
            out: c.out,
        })
    }

    /// The resolved settings as a config file that reproduces this run.
    pub fn to_config(&self) -> RunConfig {
        let mut c = RunConfig {
            tol: Some(self.tol),
            format: Some(self.format),
            out: self.out.clone(),
            ..RunConfig::default()
        };
        match &self.job {
            Job::CorpusList => c.command = Some("corpus list".into()),
            Job::Conditions {
                function,
                t_grid,
                t1,
            } => {
                c.command = Some("conditions".into());
                c.function = Some(function.clone());
                c.t_grid = Some(*t_grid);
                c.t1 = Some(*t1);
            }
            Job::Partial { function, x, t } => {
                c.command = Some("partial".into());
                c.function = Some(function.clone());
                c.x = Some(*x);
                c.t = Some(*t);
            }
            Job::Mean { function, x, h } | Job::Diff { function, x, h } => {
                let name = if matches!(self.job, Job::Mean { .. }) {
                    "mean"
                } else {
                    "diff"
                };
                c.command = Some(name.into());
                c.function = Some(function.clone());
                c.x = Some(*x);
                c.h = Some(*h);
            }
            Job::Theorem2 {
                function,
                x_grid,
                h_seq,
            } => {
                c.command = Some("verify theorem2".into());
                c.function = Some(function.clone());
                c.x_grid = Some(*x_grid);
                c.h_seq = Some(*h_seq);
            }
            Job::Theorem3 {
                function,
                x0,
                t_grid,
                h_seq,
            } => {
                c.command = Some("verify theorem3".into());
                c.function = Some(function.clone());
                c.x0 = Some(*x0);
                c.t_grid = *t_grid;
                c.h_seq = Some(*h_seq);
            }
            Job::Lemma {
                check,
                function,
                t_grid,
                t1,
            } => {
                c.command = Some(format!("verify {}", check.as_str()));
                c.function = Some(function.clone());
                c.t_grid = Some(*t_grid);
                c.t1 = Some(*t1);
            }
        }
        c
    }
}
