//! Table rows and report rendering.

use std::io::Write;

use anyhow::{Context, Result};
use opinfo_core::BoundDirection;
use serde::Serialize;

use crate::config::{ExperimentConfig, Format};

/// One output row; every table shares these columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: &'static str,
    pub theory: String,
    pub state_id: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub epsilon: Option<f64>,
    pub criterion: String,
    pub value: Option<f64>,
    pub bound_direction: BoundDirection,
    pub seed: u64,
}

impl Row {
    pub fn new(
        experiment: &'static str,
        theory: &str,
        state_id: &str,
        criterion: &str,
        value: Option<f64>,
        bound: BoundDirection,
        seed: u64,
    ) -> Self {
        Self {
            experiment,
            theory: theory.to_string(),
            state_id: state_id.to_string(),
            n: None,
            m: None,
            epsilon: None,
            criterion: criterion.to_string(),
            value,
            bound_direction: bound,
            seed,
        }
    }

    pub fn block(mut self, n: usize, m: Option<usize>, eps: f64) -> Self {
        self.n = Some(n);
        self.m = m;
        self.epsilon = Some(eps);
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub experiment: &'static str,
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    /// Subcommand-specific structured results.
    pub details: serde_json::Value,
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &report.rows {
                w.serialize(r)?;
            }
            if report.rows.is_empty() {
                w.write_record(["experiment", "theory", "state_id", "N", "M", "epsilon", "criterion", "value", "bound_direction", "seed"])?;
            }
            Ok(String::from_utf8(w.into_inner().context("flushing csv")?)?)
        }
    }
}

pub fn emit(report: &Report) -> Result<()> {
    let text = render(report, report.config.format())?;
    match &report.config.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}
