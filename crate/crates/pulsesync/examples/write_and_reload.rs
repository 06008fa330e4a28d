//! Round-tripping a run through the on-disk formats.
//!
//! Writes a config, reads it back, runs it, writes the full output set
//! (per-agent CSVs, metric CSV, summary JSON, manifest), re-parses every
//! file, and cross-checks the parsed numbers against the in-memory trace.
//! Floats are rendered with enough digits to re-parse to the same bits,
//! so every comparison below is exact.
//!
//! Run with: cargo run --example write_and_reload

use pulsesync::actuation::ActuationMethod;
use pulsesync::coupling::{CouplingConfig, CouplingMode};
use pulsesync::engine::{run, ExperimentConfig, InitCondition};
use pulsesync::io::{
    read_agent_csv, read_config, read_manifest, read_metric_csv, read_summary, write_config,
    write_manifest, write_run_outputs, RunManifest,
};
use pulsesync::network::NetworkConfig;

fn main() -> pulsesync::Result<()> {
    let dir = std::env::temp_dir().join("pulsesync_write_and_reload");
    std::fs::create_dir_all(&dir).expect("failed to create temp output dir");

    let config = ExperimentConfig {
        n_agents: 4,
        coupling: CouplingConfig {
            mode: CouplingMode::Sync,
            gain: 0.5,
        },
        method: ActuationMethod::default_constant_time(),
        network: NetworkConfig::default(),
        init: InitCondition::EquallySpaced,
        dt: 0.05,
        t_end: 30.0,
        seed: 7,
        heading_noise_std: 0.0,
        analysis: Default::default(),
    };

    let config_path = dir.join("config.json");
    write_config(&config_path, &config)?;
    let reloaded = read_config(&config_path)?;
    println!(
        "config round-trip: {}",
        if reloaded == config {
            "exact"
        } else {
            "MISMATCH"
        }
    );

    let (trace, summary) = run(&reloaded)?;
    let files = write_run_outputs(&dir, &trace, &summary)?;
    println!("wrote {} files to {}", files.len(), dir.display());
    for f in &files {
        println!("  {f}");
    }

    // Re-parse and cross-validate against the in-memory trace.
    let metric_rows = read_metric_csv(&dir.join("metric.csv"))?;
    let mut metric_exact = metric_rows.len() == trace.records.len();
    for (row, rec) in metric_rows.iter().zip(&trace.records) {
        metric_exact &= row.t == rec.t && row.metric == rec.metric.radians();
    }
    println!(
        "metric.csv rows: {} ({})",
        metric_rows.len(),
        if metric_exact {
            "bit-exact"
        } else {
            "MISMATCH"
        }
    );

    let mut phase_cells = 0usize;
    let mut phase_exact = true;
    for (idx, sample0) in trace.records[0].phases.iter().enumerate() {
        let rows = read_agent_csv(&dir.join(format!("agent_{}.csv", sample0.id.0)))?;
        for (row, rec) in rows.iter().zip(&trace.records) {
            let sample = &rec.phases[idx];
            phase_exact &= row.t == rec.t && row.phase == sample.phase.radians();
            phase_cells += 1;
        }
    }
    println!(
        "agent CSV phase cells checked: {phase_cells} ({})",
        if phase_exact { "bit-exact" } else { "MISMATCH" }
    );

    let summary_reloaded = read_summary(&dir.join("summary.json"))?;
    println!(
        "summary.json round-trip: {}",
        if summary_reloaded == summary {
            "exact"
        } else {
            "MISMATCH"
        }
    );

    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .expect("system clock before unix epoch")
        .as_secs_f64();
    let manifest = RunManifest {
        config_path: config_path.display().to_string(),
        output_dir: dir.display().to_string(),
        resolved_seed: reloaded.seed,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        started_at_unix: now,
        finished_at_unix: now,
        files,
    };
    write_manifest(&dir, &manifest)?;
    let manifest_reloaded = read_manifest(&dir.join("manifest.json"))?;
    println!(
        "manifest.json round-trip: {}",
        if manifest_reloaded == manifest {
            "exact"
        } else {
            "MISMATCH"
        }
    );
    Ok(())
}
