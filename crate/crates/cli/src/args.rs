//! Command-line flags and the optional TOML config file.
//!
//! Every flag is optional at the clap level so that a config file can
//! supply it; required values are checked after merging. Flags win over
//! the file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fskan",
    version,
    about = "Hermite pseudospectral solver for the MHD Falkner-Skan equation",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML file whose keys mirror the long flags (e.g. `M = 10`, `tau-max = 12`).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum Preset {
    #[value(name = "paper-tables")]
    #[serde(rename = "paper-tables")]
    PaperTables,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one case and print the report as JSON.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Solve a list of M values (in parallel) and tabulate f''(0).
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Sample f, f', f'' on [0, tau-max].
    #[command(allow_negative_numbers = true)]
    Profile(ProfileArgs),
    /// Dump |a_i| and log10|a_i| of a stored solution.
    Coeffs(CoeffsArgs),
    /// Run the shooting-method reference solver.
    #[command(allow_negative_numbers = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProblemFlags {
    /// Wedge exponent m (beta = 2m/(m+1)).
    #[arg(long)]
    pub m: Option<f64>,
    /// Magnetic parameter M.
    #[arg(long = "M", value_name = "M")]
    pub magnetic: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectralFlags {
    /// Expansion order N.
    #[arg(long = "N", value_name = "N")]
    pub order: Option<usize>,
    /// Map constant k.
    #[arg(long)]
    pub k: Option<f64>,
    /// Domain scaling l.
    #[arg(long)]
    pub l: Option<f64>,
    /// Newton residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Take unset N, k, l from the published table row for (m, M).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemFlags,
    #[command(flatten)]
    pub spectral: SpectralFlags,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub m: Option<f64>,
    /// Comma-separated M values.
    #[arg(long = "M-list", value_name = "M,M,...", value_delimiter = ',')]
    pub magnetic_list: Option<Vec<f64>>,
    #[command(flatten)]
    pub spectral: SpectralFlags,
    /// Add the shooting solution and |spectral - shooting| to each row.
    #[arg(long)]
    pub with_oracle: bool,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProfileArgs {
    /// Solution document written by `solve`; otherwise solve from flags.
    #[arg(long, value_name = "FILE")]
    pub solution: Option<PathBuf>,
    #[command(flatten)]
    pub problem: ProblemFlags,
    #[command(flatten)]
    pub spectral: SpectralFlags,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Number of evenly spaced samples, endpoints included.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CoeffsArgs {
    /// Solution document written by `solve`.
    #[arg(long, value_name = "FILE")]
    pub solution: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemFlags,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// RK4 step.
    #[arg(long)]
    pub h: Option<f64>,
}

/// Contents of `--config`. Keys are the long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub m: Option<f64>,
    #[serde(rename = "M")]
    pub magnetic: Option<f64>,
    #[serde(rename = "M-list")]
    pub magnetic_list: Option<Vec<f64>>,
    #[serde(rename = "N")]
    pub order: Option<usize>,
    pub k: Option<f64>,
    pub l: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub tau_max: Option<f64>,
    pub samples: Option<usize>,
    pub h: Option<f64>,
    pub with_oracle: Option<bool>,
    pub preset: Option<Preset>,
    pub solution: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

impl ProblemFlags {
    pub fn merged(&self, file: &FileConfig) -> Self {
        Self {
            m: self.m.or(file.m),
            magnetic: self.magnetic.or(file.magnetic),
        }
    }
}

impl SpectralFlags {
    pub fn merged(&self, file: &FileConfig) -> Self {
        Self {
            order: self.order.or(file.order),
            k: self.k.or(file.k),
            l: self.l.or(file.l),
            tol: self.tol.or(file.tol),
            max_iter: self.max_iter.or(file.max_iter),
            preset: self.preset.or(file.preset),
        }
    }
}
