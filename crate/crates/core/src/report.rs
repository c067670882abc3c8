//! On-disk result formats consumed by the plotting scripts.
//!
//! Every file carries a [`Metadata`] record. CSV files start with one
//! `# metadata: {json}` comment line followed by a header row; JSON
//! documents hold it under the `metadata` key. Non-finite numbers are
//! written as `NaN` in CSV and `null` in JSON.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Engine, KrylovSettings};
use crate::error::{Error, Result};
use crate::lgi::{MeasurementEvent, SampleOutcome};
use crate::spin::InteractionRange;
use crate::scan::{LightConeFit, ModelTemplate, ScanConfig, ScanResult, TableRow, TimeGrid};

pub const SCHEMA_VERSION: u32 = 1;
const METADATA_PREFIX: &str = "# metadata: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Sweep,
    Lightcone,
    Table,
    Sample,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub schema_version: u32,
    pub generator_version: String,
    pub kind: ReportKind,
    #[serde(default)]
    pub model: Option<ModelTemplate>,
    #[serde(default)]
    pub grid: Option<TimeGrid>,
    #[serde(default)]
    pub engine: Option<Engine>,
    #[serde(default)]
    pub krylov: Option<KrylovSettings>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Name of the closed-form curve in oracle files.
    #[serde(default)]
    pub curve: Option<String>,
}

impl Metadata {
    pub fn new(kind: ReportKind) -> Self {
        Metadata {
            schema_version: SCHEMA_VERSION,
            generator_version: crate::VERSION.to_string(),
            kind,
            model: None,
            grid: None,
            engine: None,
            krylov: None,
            threshold: None,
            seed: None,
            curve: None,
        }
    }

    pub fn for_scan(kind: ReportKind, config: &ScanConfig) -> Self {
        Metadata {
            model: Some(config.model),
            grid: Some(config.grid),
            engine: Some(config.engine),
            krylov: Some(config.krylov),
            threshold: Some(config.violation_threshold),
            ..Metadata::new(kind)
        }
    }
}

/// One row of the sweep CSV. Optimizer columns are empty when the sweep
/// ran without optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub ht: f64,
    #[serde(rename = "K_fixed_x")]
    pub k_fixed_x: f64,
    #[serde(rename = "K_opt")]
    pub k_opt: Option<f64>,
    pub vx: Option<f64>,
    pub vy: Option<f64>,
    pub vz: Option<f64>,
    #[serde(rename = "K_fixed_y")]
    pub k_fixed_y: f64,
    #[serde(rename = "K_fixed_z")]
    pub k_fixed_z: f64,
    pub error: Option<String>,
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "n", "ht", "K_fixed_x", "K_opt", "vx", "vy", "vz", "K_fixed_y", "K_fixed_z", "error",
];

pub fn sweep_rows(result: &ScanResult) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for s in &result.series {
        for p in &s.points {
            rows.push(SweepRow {
                n: s.n,
                ht: p.ht,
                k_fixed_x: p.k_axes[0],
                k_opt: p.k_opt,
                vx: p.axis_opt.map(|v| v[0]),
                vy: p.axis_opt.map(|v| v[1]),
                vz: p.axis_opt.map(|v| v[2]),
                k_fixed_y: p.k_axes[1],
                k_fixed_z: p.k_axes[2],
                error: p.error.clone(),
            });
        }
    }
    rows
}

/// One point of a closed-form curve; the curve is named in the metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub ht: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCsvRow {
    pub range: InteractionRange,
    pub n: usize,
    #[serde(rename = "K_max")]
    pub k_max: f64,
    pub ht_at_max: f64,
    pub reference: Option<f64>,
    pub deviation: Option<f64>,
    pub within_tolerance: Option<bool>,
}

impl From<&TableRow> for TableCsvRow {
    fn from(r: &TableRow) -> Self {
        TableCsvRow {
            range: r.range,
            n: r.n,
            k_max: r.k_max,
            ht_at_max: r.ht_at_max,
            reference: r.reference,
            deviation: r.deviation,
            within_tolerance: r.within_tolerance,
        }
    }
}

pub fn write_csv<W: Write, R: Serialize>(mut w: W, metadata: &Metadata, rows: &[R]) -> Result<()> {
    writeln!(w, "{METADATA_PREFIX}{}", to_json_line(metadata)?)?;
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r).map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Format(e.to_string()),
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: BufRead, T: DeserializeOwned>(mut r: R) -> Result<(Metadata, Vec<T>)> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let json = first
        .trim_end()
        .strip_prefix(METADATA_PREFIX)
        .ok_or_else(|| Error::Format("first line is not a metadata comment".into()))?;
    let metadata: Metadata = serde_json::from_str(json).map_err(|e| Error::Format(format!("metadata: {e}")))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Format(e.to_string()))?;
    Ok((metadata, rows))
}

pub fn write_sweep_csv<W: Write>(w: W, result: &ScanResult) -> Result<()> {
    write_csv(w, &Metadata::for_scan(ReportKind::Sweep, &result.config), &sweep_rows(result))
}

pub fn read_sweep_csv<R: BufRead>(r: R) -> Result<(Metadata, Vec<SweepRow>)> {
    read_csv(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauEntry {
    pub n: usize,
    pub tau: Option<f64>,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightConeReport {
    pub metadata: Metadata,
    pub taus: Vec<TauEntry>,
    pub fit: Option<LightConeFit>,
}

impl LightConeReport {
    pub fn new(result: &ScanResult, fit: Option<LightConeFit>) -> Self {
        LightConeReport {
            metadata: Metadata::for_scan(ReportKind::Lightcone, &result.config),
            taus: result
                .series
                .iter()
                .map(|s| TauEntry {
                    n: s.n,
                    tau: s.tau,
                    refined: s.tau_refined,
                })
                .collect(),
            fit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub metadata: Metadata,
    pub window: f64,
    pub tolerance: f64,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub metadata: Metadata,
    pub n_sites: usize,
    pub first: MeasurementEvent,
    pub second: MeasurementEvent,
    pub outcome: SampleOutcome,
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| match e.io_error_kind() {
        Some(_) => Error::Io(e.to_string()),
        None => Error::Format(e.to_string()),
    })?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<R: BufRead, T: DeserializeOwned>(r: R) -> Result<T> {
    serde_json::from_reader(r).map_err(|e| Error::Format(e.to_string()))
}

fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Format(e.to_string()))
}
