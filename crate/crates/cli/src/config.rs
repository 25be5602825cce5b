//! Experiment configuration: an optional JSON file overlaid with flags.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use qpurify_core::reconstruction::MeasurementCount;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 1_000;
pub const DEFAULT_PHASE_GRID: usize = 64;
pub const DEFAULT_ENTROPY_POINTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    /// Reconstruct, purify and score one initial state or record.
    Reconstruct,
    /// Closed-form fidelities against constructed states over Haar samples.
    Montecarlo,
    /// Entropy and its determinant slope on a determinant grid.
    EntropySweep,
    /// Dilation checks and entropy bookkeeping over random purifications.
    KrausAudit,
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "qpurify", version, about = "Entanglement-free qubit purification experiments")]
pub struct Args {
    /// Command to run; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<CommandName>,

    /// Number of measured spin components (1 = z, 2 = z,y, 3 = z,y,x).
    #[arg(long)]
    pub k: Option<usize>,

    /// Comma-separated "+" outcome probabilities, one per measured axis.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub probs: Option<Vec<f64>>,

    /// Initial state as Re α, Im α, Re β, Im β.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub psi: Option<Vec<f64>>,

    /// Sample count (grid points for entropy-sweep).
    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Phase grid size for Protocol-A averages.
    #[arg(long)]
    pub phase_grid: Option<usize>,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// JSON file with the same fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<CommandName>,
    pub k: Option<usize>,
    pub probs: Option<Vec<f64>>,
    pub psi: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub phase_grid: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Validated configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandName,
    pub k: Option<MeasurementCount>,
    pub probs: Option<Vec<f64>>,
    pub psi: Option<[f64; 4]>,
    pub samples: usize,
    pub seed: u64,
    pub phase_grid: usize,
    /// Not echoed, so that runs differing only in destination produce
    /// identical files.
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Reads `--config` if given, then applies the flags on top.
    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::resolve(file, args)
    }

    pub fn resolve(file: ConfigFile, args: &Args) -> Result<Self, CliError> {
        let command = args
            .command
            .or(file.command)
            .ok_or_else(|| CliError::Config("command: missing (give it as an argument or in the config file)".into()))?;
        let probs = args.probs.clone().or(file.probs);
        let psi = args.psi.clone().or(file.psi).map(|v| parse_psi(&v)).transpose()?;
        let k = args.k.or(file.k).map(parse_k).transpose()?;
        let default_samples = match command {
            CommandName::EntropySweep => DEFAULT_ENTROPY_POINTS,
            _ => DEFAULT_SAMPLES,
        };
        let cfg = Self {
            command,
            k,
            probs,
            psi,
            samples: args.samples.or(file.samples).unwrap_or(default_samples),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            phase_grid: args.phase_grid.or(file.phase_grid).unwrap_or(DEFAULT_PHASE_GRID),
            output_path: args.out.clone().or(file.output_path),
            format: args.format.or(file.format).unwrap_or_default(),
        };
        cfg.validate()
    }

    fn validate(mut self) -> Result<Self, CliError> {
        if self.samples == 0 {
            return Err(CliError::Config("samples: must be at least 1".into()));
        }
        if self.phase_grid < qpurify_core::analysis::MIN_PHASE_GRID {
            return Err(CliError::Config(format!(
                "phase_grid: must be at least {} (got {})",
                qpurify_core::analysis::MIN_PHASE_GRID,
                self.phase_grid
            )));
        }
        if let Some(p) = &self.probs {
            if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                return Err(CliError::Config(format!("probs: value #{i} = {v} lies outside [0, 1]")));
            }
        }
        match self.command {
            CommandName::Reconstruct => match (&self.probs, &self.psi) {
                (Some(_), Some(_)) => return Err(CliError::Config("probs, psi: give exactly one".into())),
                (None, None) => return Err(CliError::Config("probs, psi: one of them is required".into())),
                (Some(p), None) => {
                    let from_len = parse_k(p.len()).map_err(|_| {
                        CliError::Config(format!("probs: expected 1 to 3 values, got {}", p.len()))
                    })?;
                    match self.k {
                        Some(k) if k != from_len => {
                            return Err(CliError::Config(format!(
                                "probs: {} values given but k = {}",
                                p.len(),
                                k.get()
                            )))
                        }
                        _ => self.k = Some(from_len),
                    }
                }
                (None, Some(_)) => {
                    if self.k.is_none() {
                        return Err(CliError::Config("k: required with psi".into()));
                    }
                }
            },
            CommandName::Montecarlo => {
                if self.k.is_none() {
                    return Err(CliError::Config("k: required for montecarlo".into()));
                }
            }
            CommandName::EntropySweep | CommandName::KrausAudit => {}
        }
        Ok(self)
    }

    pub fn measurement_count(&self) -> MeasurementCount {
        self.k.expect("validated for commands that use it")
    }
}

fn parse_k(k: usize) -> Result<MeasurementCount, CliError> {
    MeasurementCount::try_from(k).map_err(|_| CliError::Config(format!("k: must be 1, 2 or 3 (got {k})")))
}

fn parse_psi(v: &[f64]) -> Result<[f64; 4], CliError> {
    v.try_into()
        .map_err(|_| CliError::Config(format!("psi: expected 4 numbers (Re α, Im α, Re β, Im β), got {}", v.len())))
}
