use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bounds::{default_bounds, evaluate_bound, BoundEntry, BoundInputs};
use super::config::{ExperimentConfig, Mode};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub rounds: usize,
    pub mistakes: usize,
    /// Canonical parts of the PAC output.
    pub output: Option<Vec<usize>>,
    pub output_loss: Option<f64>,
    /// Zero when the loss is exact.
    pub output_loss_stderr: Option<f64>,
}

/// Mean, standard error, min and max of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub mean: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    /// All zero for an empty sample; `stderr` is zero below two values.
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Aggregate { count, mean: 0.0, stderr: 0.0, min: 0.0, max: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let stderr = if count < 2 {
            0.0
        } else {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Aggregate { count, mean, stderr, min, max }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub seeds: Vec<SeedRecord>,
    pub mistakes: Aggregate,
    pub output_loss: Option<Aggregate>,
    pub bounds: Vec<BoundEntry>,
    pub wall_clock_secs: f64,
}

impl MetricsReport {
    /// Aggregates and bound checks computed from the per-seed records only.
    pub fn from_records(config: ExperimentConfig, seeds: Vec<SeedRecord>, wall_clock_secs: f64) -> Result<Self> {
        let mistakes = Aggregate::of(&seeds.iter().map(|s| s.mistakes as f64).collect::<Vec<_>>());
        let output_loss = (config.mode() == Mode::Pac)
            .then(|| seeds.iter().map(|s| s.output_loss).collect::<Option<Vec<_>>>())
            .flatten()
            .map(|v| Aggregate::of(&v));
        let names =
            config.bounds.clone().unwrap_or_else(|| default_bounds(&config.learner, config.mode() == Mode::Pac));
        let inputs = BoundInputs {
            n: config.env_params.n,
            rounds: config.rounds,
            epsilon: config.learner_params.epsilon.unwrap_or(0.1),
            delta: config.learner_params.delta.unwrap_or(0.1),
        };
        let bounds = names.iter().map(|b| evaluate_bound(b, &inputs, &seeds)).collect::<Result<_>>()?;
        Ok(MetricsReport {
            schema_version: SCHEMA_VERSION,
            config,
            seeds,
            mistakes,
            output_loss,
            bounds,
            wall_clock_secs,
        })
    }

    /// Recompute everything derived from the stored records.
    pub fn regenerate(&self) -> Result<Self> {
        MetricsReport::from_records(self.config.clone(), self.seeds.clone(), self.wall_clock_secs)
    }

    pub fn all_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    CsvSummary,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv-summary" => Ok(ReportFormat::CsvSummary),
            _ => Err(Error::Unknown { kind: "format", name: s.to_string() }),
        }
    }
}

fn ser_err(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

/// Serialize a report. The CSV has one row per seed and, when there are
/// seeds, a final aggregate row.
pub fn emit_report(report: &MetricsReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(ser_err)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::CsvSummary => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "kind",
                "seed",
                "rounds",
                "mistakes",
                "mistakes_stderr",
                "output_loss",
                "output_loss_stderr",
            ])
            .map_err(ser_err)?;
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for s in &report.seeds {
                w.write_record([
                    "seed".to_string(),
                    s.seed.to_string(),
                    s.rounds.to_string(),
                    s.mistakes.to_string(),
                    String::new(),
                    opt(s.output_loss),
                    opt(s.output_loss_stderr),
                ])
                .map_err(ser_err)?;
            }
            if !report.seeds.is_empty() {
                let rounds = report.seeds.iter().map(|s| s.rounds as f64).sum::<f64>() / report.seeds.len() as f64;
                w.write_record([
                    "aggregate".to_string(),
                    String::new(),
                    rounds.to_string(),
                    report.mistakes.mean.to_string(),
                    report.mistakes.stderr.to_string(),
                    opt(report.output_loss.map(|a| a.mean)),
                    opt(report.output_loss.map(|a| a.stderr)),
                ])
                .map_err(ser_err)?;
            }
            w.into_inner().map_err(ser_err)
        }
    }
}

/// Parse a JSON report.
pub fn parse_report(bytes: &[u8]) -> Result<MetricsReport> {
    serde_json::from_slice(bytes).map_err(ser_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_values() {
        let a = Aggregate::of(&[1.0, 2.0, 3.0, 6.0]);
        assert_eq!((a.count, a.mean, a.min, a.max), (4, 3.0, 1.0, 6.0));
        assert!((a.stderr - (14.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(Aggregate::of(&[5.0]).stderr, 0.0);
        assert_eq!(Aggregate::of(&[]).count, 0);
    }

    #[test]
    fn empty_report_csv_is_header_only() {
        let cfg = ExperimentConfig { seeds: Vec::new(), ..Default::default() };
        let r = MetricsReport::from_records(cfg, Vec::new(), 0.0).unwrap();
        let csv = String::from_utf8(emit_report(&r, ReportFormat::CsvSummary).unwrap()).unwrap();
        assert_eq!(csv, "kind,seed,rounds,mistakes,mistakes_stderr,output_loss,output_loss_stderr\n");
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
