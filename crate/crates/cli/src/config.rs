//! Experiment configuration: a TOML file overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// classical[:d], quantum[:d] or squit.
    #[arg(long)]
    pub theory: Option<String>,
    /// Preset name or explicit coordinates.
    #[arg(long)]
    pub state: Option<String>,
    /// Block lengths, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Error budgets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random restarts of every numerical search.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Objective evaluations per restart.
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Property suites to run (verify), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    /// Scheme family for rates: typical, all_projective or measure_prepare.
    #[arg(long)]
    pub family: Option<String>,
    /// Trials per suite (verify) or random pairs (fidelity-bounds).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Add a channel that is not stochastic to the validity suite.
    #[arg(long)]
    pub inject_fault: bool,
}

/// The merged configuration, echoed into every JSON report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_deserializing)]
    pub subcommand: String,
    pub theory: Option<String>,
    pub state: Option<String>,
    #[serde(rename = "N")]
    pub n: Option<Vec<usize>>,
    pub eps: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub max_evals: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub suite: Option<Vec<String>>,
    pub family: Option<String>,
    pub trials: Option<usize>,
    pub inject_fault: Option<bool>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Load the file named by `--config`, if any, and apply the flags on top.
    pub fn resolve(subcommand: &str, flags: &Flags) -> Result<Self> {
        let mut c = match &flags.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        c.subcommand = subcommand.to_string();
        macro_rules! over {
            ($($f:ident),*) => {$(
                if flags.$f.is_some() {
                    c.$f = flags.$f.clone();
                }
            )*};
        }
        over!(theory, state, n, eps, seed, restarts, max_evals, out, format, suite, family, trials);
        if flags.inject_fault {
            c.inject_fault = Some(true);
        }
        Ok(c)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn search(&self) -> opinfo_core::SearchConfig {
        let d = opinfo_core::SearchConfig::default();
        opinfo_core::SearchConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            max_evals: self.max_evals.unwrap_or(d.max_evals),
            seed: self.seed(),
            tol: d.tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "theory = \"quantum\"\nN = [2, 4]\nseed = 5\nformat = \"json\"\n").unwrap();
        let flags = Flags {
            config: Some(path.clone()),
            seed: Some(9),
            ..Flags::default()
        };
        let c = ExperimentConfig::resolve("rates", &flags).unwrap();
        assert_eq!(c.theory.as_deref(), Some("quantum"));
        assert_eq!(c.n, Some(vec![2, 4]));
        assert_eq!(c.seed(), 9);
        assert_eq!(c.format(), Format::Json);
        std::fs::write(&path, "colour = 3\n").unwrap();
        assert!(ExperimentConfig::resolve("rates", &flags).is_err());
    }
}
