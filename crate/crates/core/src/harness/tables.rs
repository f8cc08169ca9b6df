//! Comparison tables: one block of rows per model with the importance-sampling
//! estimator, both exact double-precision routes, crude Monte Carlo and the
//! oracle.
//!
//! CSV header: `model,algorithm,n,t,N,K,estimate,re_hat,rtv,cpu_seconds,flags`.
//! `estimate` has 6 significant digits, `re_hat` and `rtv` 3, all in scientific
//! notation. An undefined relative error prints as `undefined`; columns that
//! do not apply to a row (N, K and the statistics of exact and oracle rows,
//! timing of oracle rows) are empty.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{expm_survival, ross_cdf, Verdict, FLOOR_THRESHOLD};
use crate::harness::models::{builtin_models, ModelSpec};
use crate::harness::{run_trials, Estimator, TrialSummary};

pub const CSV_HEADER: &str = "model,algorithm,n,t,N,K,estimate,re_hat,rtv,cpu_seconds,flags";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flag {
    #[serde(rename = "floor-regime")]
    FloorRegime,
    #[serde(rename = "catastrophic")]
    Catastrophic,
    #[serde(rename = "undefined-re")]
    UndefinedRe,
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "poisson-tail")]
    PoissonTail,
    #[serde(rename = "extended-precision-ross")]
    ExtendedPrecisionRoss,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::FloorRegime => "floor-regime",
            Flag::Catastrophic => "catastrophic",
            Flag::UndefinedRe => "undefined-re",
            Flag::Oracle => "oracle",
            Flag::PoissonTail => "poisson-tail",
            Flag::ExtendedPrecisionRoss => "extended-precision-ross",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Sample size per run for the stochastic rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplePolicy {
    /// `N = factor * n`.
    PerComponent(u64),
    Fixed(u64),
}

impl Default for SamplePolicy {
    fn default() -> Self {
        SamplePolicy::PerComponent(100)
    }
}

impl SamplePolicy {
    pub fn sample_size(&self, n: usize) -> u64 {
        match *self {
            SamplePolicy::PerComponent(factor) => factor * n as u64,
            SamplePolicy::Fixed(size) => size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub model: String,
    pub algorithm: String,
    pub n: usize,
    pub t: f64,
    #[serde(rename = "N")]
    pub sample_size: Option<u64>,
    #[serde(rename = "K")]
    pub runs: Option<usize>,
    /// `NaN` when the route cannot produce a number; serialized as null.
    pub estimate: f64,
    pub re_hat: Option<f64>,
    pub rtv: Option<f64>,
    pub cpu_seconds: Option<f64>,
    pub flags: Vec<Flag>,
}

impl TableRow {
    fn base(model: &ModelSpec, algorithm: &str, estimate: f64) -> Self {
        TableRow {
            model: model.name.clone(),
            algorithm: algorithm.to_string(),
            n: model.problem.n(),
            t: model.problem.threshold(),
            sample_size: None,
            runs: None,
            estimate,
            re_hat: None,
            rtv: None,
            cpu_seconds: None,
            flags: Vec::new(),
        }
    }

    fn from_summary(model: &ModelSpec, summary: &TrialSummary) -> Self {
        let mut row = TableRow::base(model, summary.algorithm, summary.mean);
        row.sample_size = Some(summary.sample_size);
        row.runs = Some(summary.runs);
        row.re_hat = summary.re_hat;
        row.rtv = summary.rtv;
        row.cpu_seconds = Some(summary.total_cpu_seconds);
        if !summary.re_defined() {
            row.flags.push(Flag::UndefinedRe);
        }
        row
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    /// CSV cells in header order.
    pub fn csv_record(&self) -> [String; 11] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let stat = |v: Option<f64>| match v {
            Some(x) => format!("{x:.2e}"),
            None if self.has_flag(Flag::UndefinedRe) => "undefined".to_string(),
            None => String::new(),
        };
        [
            self.model.clone(),
            self.algorithm.clone(),
            self.n.to_string(),
            self.t.to_string(),
            opt(self.sample_size.map(|v| v.to_string())),
            opt(self.runs.map(|v| v.to_string())),
            format!("{:.5e}", self.estimate),
            stat(self.re_hat),
            stat(self.rtv),
            opt(self.cpu_seconds.map(|v| format!("{v:.6}"))),
            self.flags.iter().map(Flag::as_str).collect::<Vec<_>>().join(";"),
        ]
    }
}

fn exact_rows(model: &ModelSpec) -> Result<[TableRow; 2]> {
    let problem = &model.problem;

    let start = Instant::now();
    let ross = ross_cdf(problem);
    let ross_seconds = start.elapsed().as_secs_f64();
    let mut ross_row = match ross {
        Ok((value, report)) => {
            let mut row = TableRow::base(model, "exact-ross", value);
            if report.verdict == Verdict::Catastrophic {
                row.flags.push(Flag::Catastrophic);
            }
            if value < FLOOR_THRESHOLD {
                row.flags.push(Flag::FloorRegime);
            }
            row
        }
        // Equal rates divide by zero in the closed form.
        Err(Error::DuplicateRates { .. }) => {
            let mut row = TableRow::base(model, "exact-ross", f64::NAN);
            row.flags.push(Flag::Catastrophic);
            row
        }
        Err(e) => return Err(e),
    };
    ross_row.cpu_seconds = Some(ross_seconds);

    let start = Instant::now();
    let survival = expm_survival(problem)?;
    let expm_seconds = start.elapsed().as_secs_f64();
    let value = survival.cdf();
    let mut expm_row = TableRow::base(model, "exact-expm", value);
    if value < FLOOR_THRESHOLD {
        expm_row.flags.push(Flag::FloorRegime);
    }
    expm_row.cpu_seconds = Some(expm_seconds);
    Ok([ross_row, expm_row])
}

fn oracle_row(model: &ModelSpec) -> TableRow {
    let mut row = TableRow::base(model, "oracle", model.oracle_value);
    row.flags.push(Flag::Oracle);
    row.flags.push(match model.provenance {
        super::OracleProvenance::PoissonTail => Flag::PoissonTail,
        super::OracleProvenance::ExtendedPrecisionRoss => Flag::ExtendedPrecisionRoss,
    });
    row
}

/// Rows for the given models: IS, exact-ross, exact-expm, crude-MC, oracle per model.
pub fn build_table_rows(
    models: &[ModelSpec],
    policy: SamplePolicy,
    runs: usize,
    master_seed: u64,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::with_capacity(models.len() * 5);
    for model in models {
        let sample_size = policy.sample_size(model.problem.n());
        let is = run_trials(&model.problem, Estimator::ImportanceSampling, sample_size, runs, master_seed)?;
        let mc = run_trials(&model.problem, Estimator::CrudeMonteCarlo, sample_size, runs, master_seed)?;
        let [ross_row, expm_row] = exact_rows(model)?;
        rows.push(TableRow::from_summary(model, &is));
        rows.push(ross_row);
        rows.push(expm_row);
        rows.push(TableRow::from_summary(model, &mc));
        rows.push(oracle_row(model));
    }
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[TableRow], format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
            writer
                .write_record(CSV_HEADER.split(','))
                .and_then(|_| rows.iter().try_for_each(|r| writer.write_record(r.csv_record())))
                .map_err(|e| Error::Io(e.to_string()))?;
            writer.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.to_string()))?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Builds the tables for the built-in models and writes them to `output_path`.
pub fn reproduce_tables(
    output_path: &Path,
    policy: SamplePolicy,
    runs: usize,
    master_seed: u64,
    format: OutputFormat,
) -> Result<Vec<TableRow>> {
    let rows = build_table_rows(&builtin_models(), policy, runs, master_seed)?;
    let file = File::create(output_path)?;
    write_rows(&rows, format, BufWriter::new(file))?;
    Ok(rows)
}
