//! Flags, the optional TOML config file and their merge into a [`RunConfig`].
//!
//! Precedence is flags, then the config file, then the defaults. Without a
//! `--well` every command runs over the three benchmark wells.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use twopiece::momentum::{DEFAULT_CUTOFFS, TAIL_GRID_POINTS};
use twopiece::wells::{WellKind, WellSpec};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "twopiece", version)]
#[command(about = "Bound states and momentum tails of two-piece symmetric wells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bound-state energies with normalization and the Numerov cross-check
    Solve,
    /// One CSV of p, I, p²I, p⁴I, p⁶I per state plus a JSON sidecar per well
    Figure,
    /// Momentum moments with cutoff studies next to the position-space values
    Moments,
    /// Power-law tail fits of I(p)
    Tails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Well shape; all three benchmark wells when omitted
    #[arg(long, global = true, value_parser = parse_kind)]
    pub well: Option<WellKind>,

    /// Depth or scale V0 (default: 5, or 15 for convexp)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub v0: Option<f64>,

    /// Width a (default: 1)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Number of states to solve for (default: 2)
    #[arg(long, global = true)]
    pub max_states: Option<usize>,

    /// Restrict output to the state with this index
    #[arg(long, global = true)]
    pub state: Option<usize>,

    /// Moment order j in ⟨p^{2j}⟩ (default: 1, 2 and 3)
    #[arg(long, global = true)]
    pub j: Option<u8>,

    /// Largest momentum on the figure or tail grid (default: 50)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub pmax: Option<f64>,

    /// Grid points (default: 200 for figures, 400 for tails)
    #[arg(long, global = true)]
    pub points: Option<usize>,

    /// Comma-separated cutoffs P for the moment integrals
    #[arg(long, global = true, value_delimiter = ',')]
    pub cutoffs: Option<Vec<f64>>,

    /// Output file, or output directory for `figure` (default: stdout, or `.`)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format (default: csv for solve, json for moments and tails)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for momentum-space tabulation
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// TOML file with any of the settings above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<WellKind, String> {
    s.parse()
        .map_err(|_| format!("expected triangular, convexp or divexp, got '{s}'"))
}

/// Settings accepted in the `--config` file, with the flag names in snake case.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub well: Option<WellKind>,
    pub v0: Option<f64>,
    pub a: Option<f64>,
    pub max_states: Option<usize>,
    pub state: Option<usize>,
    pub j: Option<u8>,
    pub pmax: Option<f64>,
    pub points: Option<usize>,
    pub cutoffs: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

pub const DEFAULT_MAX_STATES: usize = 2;
pub const DEFAULT_PMAX: f64 = 50.0;
pub const DEFAULT_FIGURE_POINTS: usize = 200;

/// Fully validated settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub wells: Vec<WellSpec>,
    pub max_states: usize,
    pub state: Option<usize>,
    pub js: Vec<u8>,
    pub pmax: f64,
    pub points: usize,
    pub cutoffs: Vec<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::resolve(cli.command, &cli.flags, &file)
    }

    pub fn resolve(command: Command, flags: &Flags, file: &FileConfig) -> Result<Self, CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let well = flags.well.or(file.well);
        let v0 = flags.v0.or(file.v0);
        let a = flags.a.or(file.a);
        let wells = match well {
            Some(kind) => {
                let bench = WellSpec::benchmark(kind);
                let spec = WellSpec::new(kind, v0.unwrap_or(bench.v0), a.unwrap_or(bench.a))
                    .map_err(|e| CliError::Config(e.to_string()))?;
                vec![spec]
            }
            None if v0.is_some() || a.is_some() => {
                return bad("--v0 and --a need --well".into());
            }
            None => WellKind::ALL
                .iter()
                .map(|&k| WellSpec::benchmark(k))
                .collect(),
        };

        let state = flags.state.or(file.state);
        let mut max_states = flags
            .max_states
            .or(file.max_states)
            .unwrap_or(DEFAULT_MAX_STATES);
        if max_states == 0 {
            return bad("--max-states must be at least 1".into());
        }
        if let Some(n) = state {
            max_states = max_states.max(n + 1);
        }

        let js = match flags.j.or(file.j) {
            Some(j) if (1..=3).contains(&j) => vec![j],
            Some(j) => return bad(format!("--j must be 1, 2 or 3, got {j}")),
            None => vec![1, 2, 3],
        };

        let pmax = flags.pmax.or(file.pmax).unwrap_or(DEFAULT_PMAX);
        if !(pmax.is_finite() && pmax > 0.0) {
            return bad(format!("--pmax must be positive, got {pmax}"));
        }
        let default_points = match command {
            Command::Tails => TAIL_GRID_POINTS,
            _ => DEFAULT_FIGURE_POINTS,
        };
        let points = flags.points.or(file.points).unwrap_or(default_points);
        if points < 2 {
            return bad(format!("--points must be at least 2, got {points}"));
        }

        let cutoffs = flags
            .cutoffs
            .clone()
            .or_else(|| file.cutoffs.clone())
            .unwrap_or_else(|| DEFAULT_CUTOFFS.to_vec());
        check_cutoffs(&cutoffs)?;

        let format = flags.format.or(file.format).unwrap_or(match command {
            Command::Moments | Command::Tails => Format::Json,
            Command::Solve | Command::Figure => Format::Csv,
        });
        let threads = flags.threads.or(file.threads);
        if threads == Some(0) {
            return bad("--threads must be at least 1".into());
        }

        Ok(Self {
            command,
            wells,
            max_states,
            state,
            js,
            pmax,
            points,
            cutoffs,
            out: flags.out.clone().or_else(|| file.out.clone()),
            format,
            threads,
        })
    }
}

fn check_cutoffs(c: &[f64]) -> Result<(), CliError> {
    let fail = |why: &str| Err(CliError::Config(format!("--cutoffs {c:?}: {why}")));
    if c.len() < 5 {
        return fail("need at least 5 values");
    }
    if !c.iter().all(|p| p.is_finite() && *p > 0.0) {
        return fail("values must be positive");
    }
    if !c.windows(2).all(|w| w[1] > w[0]) {
        return fail("values must increase");
    }
    if c[c.len() - 1] / c[0] < 100.0 {
        return fail("values must span at least two decades");
    }
    Ok(())
}
