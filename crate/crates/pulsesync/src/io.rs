//! On-disk formats: config ingestion and run artifact emission.
//!
//! A run directory contains exactly:
//! - `agent_<id>.csv` — per-agent time series, one row per tick:
//!   `t,phase,alive,commanded_delta,clamped`. The last two columns are
//!   empty except on ticks where that agent planned a new turn.
//! - `metric.csv` — the combined series: `t,metric,live_count,broadcaster`,
//!   broadcaster empty on tickless slots.
//! - `summary.json` — the run [`Summary`], absent values as `null`.
//! - `manifest.json` — provenance: where the config came from, the seed
//!   actually used, version, wall-clock bracketing, and the file list.
//!
//! Floats are rendered in Rust's shortest round-trip form, so re-parsing a
//! file recovers bit-identical values and cross-file recomputation (metric
//! from phases) agrees to full precision, not print precision.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::ExperimentConfig;
use crate::error::{Error, Result};
use crate::metrics::{MethodComparison, Summary, Trace};
use crate::AgentId;

/// Provenance of one invocation, written alongside the data files.
///
/// Wall-clock fields vary between invocations by nature; determinism
/// guarantees cover the data files, not the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: String,
    pub output_dir: String,
    /// Seed actually used (after any command-line override).
    pub resolved_seed: u64,
    pub artifact_version: String,
    /// Unix seconds.
    pub started_at_unix: f64,
    pub finished_at_unix: f64,
    /// Data files in the output directory, sorted.
    pub files: Vec<String>,
}

/// Load and validate an experiment config from a JSON file.
///
/// The document mirrors [`ExperimentConfig`] field for field; unknown keys
/// are errors, so a typo cannot silently fall back to a default.
pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let config: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    config.validate()?;
    Ok(config)
}

/// Write a config as pretty JSON (the same shape `read_config` accepts).
pub fn write_config(path: &Path, config: &ExperimentConfig) -> Result<()> {
    write_json(path, config)
}

/// Write all data files for one finished run; returns the file names, in
/// the order they belong in the manifest.
pub fn write_run_outputs(dir: &Path, trace: &Trace, summary: &Summary) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();

    // Agents can join mid-run, so the roster is the union over all records.
    let mut ids: Vec<AgentId> = Vec::new();
    for r in &trace.records {
        for s in &r.phases {
            if let Err(pos) = ids.binary_search(&s.id) {
                ids.insert(pos, s.id);
            }
        }
    }

    for &id in &ids {
        let name = format!("agent_{id}.csv");
        let path = dir.join(&name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_io(&path, e))?;
        w.write_record(["t", "phase", "alive", "commanded_delta", "clamped"])
            .map_err(|e| csv_io(&path, e))?;
        for r in &trace.records {
            // A joiner has no rows before it exists.
            let Some(sample) = r.phases.iter().find(|s| s.id == id) else {
                continue;
            };
            let response = r.responses.iter().find(|x| x.agent == id);
            let (delta, clamped) = match response {
                Some(x) => (x.commanded.radians().to_string(), x.clamped.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                r.t.to_string(),
                sample.phase.radians().to_string(),
                sample.alive.to_string(),
                delta,
                clamped,
            ])
            .map_err(|e| csv_io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        files.push(name);
    }

    let metric_path = dir.join("metric.csv");
    let mut w = csv::Writer::from_path(&metric_path).map_err(|e| csv_io(&metric_path, e))?;
    w.write_record(["t", "metric", "live_count", "broadcaster"])
        .map_err(|e| csv_io(&metric_path, e))?;
    for r in &trace.records {
        w.write_record([
            r.t.to_string(),
            r.metric.radians().to_string(),
            r.live_count().to_string(),
            r.broadcaster.map(|b| b.to_string()).unwrap_or_default(),
        ])
        .map_err(|e| csv_io(&metric_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&metric_path, e))?;
    files.push("metric.csv".into());

    write_json(&dir.join("summary.json"), summary)?;
    files.push("summary.json".into());
    Ok(files)
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    write_json(&dir.join("manifest.json"), manifest)
}

pub fn read_summary(path: &Path) -> Result<Summary> {
    read_json(path)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    read_json(path)
}

pub fn write_comparison(path: &Path, comparison: &MethodComparison) -> Result<()> {
    write_json(path, comparison)
}

pub fn read_comparison(path: &Path) -> Result<MethodComparison> {
    read_json(path)
}

/// One parsed row of an `agent_<id>.csv` file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentRow {
    pub t: f64,
    pub phase: f64,
    pub alive: bool,
    pub commanded_delta: Option<f64>,
    pub clamped: Option<bool>,
}

/// One parsed row of `metric.csv`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricRow {
    pub t: f64,
    pub metric: f64,
    pub live_count: u32,
    pub broadcaster: Option<u32>,
}

/// One row of `sweep.csv`: a gain and the summary of its run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub gain: f64,
    pub convergence_time: Option<f64>,
    pub rounds_to_converge: Option<u64>,
    pub steady_state_amplitude: f64,
    pub final_metric: f64,
    pub truncated: bool,
}

pub fn read_agent_csv(path: &Path) -> Result<Vec<AgentRow>> {
    read_csv(
        path,
        &["t", "phase", "alive", "commanded_delta", "clamped"],
        |f: &mut FieldParser| {
            Ok(AgentRow {
                t: f.f64("t")?,
                phase: f.f64("phase")?,
                alive: f.bool("alive")?,
                commanded_delta: f.opt_f64("commanded_delta")?,
                clamped: f.opt_bool("clamped")?,
            })
        },
    )
}

pub fn read_metric_csv(path: &Path) -> Result<Vec<MetricRow>> {
    read_csv(
        path,
        &["t", "metric", "live_count", "broadcaster"],
        |f: &mut FieldParser| {
            Ok(MetricRow {
                t: f.f64("t")?,
                metric: f.f64("metric")?,
                live_count: f.u64("live_count")? as u32,
                broadcaster: f.opt_u64("broadcaster")?.map(|v| v as u32),
            })
        },
    )
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record([
        "gain",
        "convergence_time",
        "rounds_to_converge",
        "steady_state_amplitude",
        "final_metric",
        "truncated",
    ])
    .map_err(|e| csv_io(path, e))?;
    for r in rows {
        w.write_record([
            r.gain.to_string(),
            r.convergence_time
                .map(|v| v.to_string())
                .unwrap_or_default(),
            r.rounds_to_converge
                .map(|v| v.to_string())
                .unwrap_or_default(),
            r.steady_state_amplitude.to_string(),
            r.final_metric.to_string(),
            r.truncated.to_string(),
        ])
        .map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    read_csv(
        path,
        &[
            "gain",
            "convergence_time",
            "rounds_to_converge",
            "steady_state_amplitude",
            "final_metric",
            "truncated",
        ],
        |f: &mut FieldParser| {
            Ok(SweepRow {
                gain: f.f64("gain")?,
                convergence_time: f.opt_f64("convergence_time")?,
                rounds_to_converge: f.opt_u64("rounds_to_converge")?,
                steady_state_amplitude: f.f64("steady_state_amplitude")?,
                final_metric: f.f64("final_metric")?,
                truncated: f.bool("truncated")?,
            })
        },
    )
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    }
}

/// Positional field access with uniform, line-numbered parse errors.
struct FieldParser<'a> {
    path: &'a Path,
    line: usize,
    record: &'a csv::StringRecord,
    next: usize,
}

impl FieldParser<'_> {
    fn take(&mut self, name: &str) -> Result<&str> {
        let idx = self.next;
        self.next += 1;
        self.record.get(idx).ok_or_else(|| Error::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            message: format!("missing column `{name}`"),
        })
    }

    fn parse<T: std::str::FromStr>(&mut self, name: &str) -> Result<T> {
        let path = self.path.to_path_buf();
        let line = self.line;
        let raw = self.take(name)?;
        raw.parse().map_err(|_| Error::Parse {
            path,
            line,
            message: format!("column `{name}`: cannot parse {raw:?}"),
        })
    }

    fn f64(&mut self, name: &str) -> Result<f64> {
        self.parse(name)
    }

    fn u64(&mut self, name: &str) -> Result<u64> {
        self.parse(name)
    }

    fn bool(&mut self, name: &str) -> Result<bool> {
        self.parse(name)
    }

    fn opt_f64(&mut self, name: &str) -> Result<Option<f64>> {
        self.optional(name, Self::f64)
    }

    fn opt_u64(&mut self, name: &str) -> Result<Option<u64>> {
        self.optional(name, Self::u64)
    }

    fn opt_bool(&mut self, name: &str) -> Result<Option<bool>> {
        self.optional(name, Self::bool)
    }

    fn optional<T>(
        &mut self,
        name: &str,
        parse: impl Fn(&mut Self, &str) -> Result<T>,
    ) -> Result<Option<T>> {
        match self.record.get(self.next) {
            Some("") => {
                self.next += 1;
                Ok(None)
            }
            _ => parse(self, name).map(Some),
        }
    }
}

fn read_csv<T>(
    path: &Path,
    expected_header: &[&str],
    mut parse_row: impl FnMut(&mut FieldParser) -> Result<T>,
) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| csv_io(path, e))?;
    let header = reader.headers().map_err(|e| csv_io(path, e))?.clone();
    if header.iter().ne(expected_header.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unexpected header {header:?}, want {expected_header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_io(path, e))?;
        let mut fields = FieldParser {
            path,
            line: i + 2, // 1-based, after the header
            record: &record,
            next: 0,
        };
        rows.push(parse_row(&mut fields)?);
    }
    Ok(rows)
}
