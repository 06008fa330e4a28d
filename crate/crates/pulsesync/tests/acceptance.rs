//! Acceptance suite: one test per release criterion, each printing a single
//! `criterion N: PASS/FAIL` line (visible with `--nocapture`).
//!
//! The criteria pin the library's headline behaviors: circular-arithmetic
//! invariants against independent brute-force oracles, fixed-point
//! stationarity, worst-case convergence times frozen as regression values,
//! dropout recovery, the qualitative actuation-method ordering, gain-sweep
//! sanity through the command-line interface, and byte-level determinism of
//! the on-disk artifacts.

use std::f64::consts::{PI, TAU};
use std::process::Command;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use pulsesync::actuation::ActuationMethod;
use pulsesync::coupling::{CouplingConfig, CouplingMode};
use pulsesync::engine::{init_experiment, run, ExperimentConfig, InitCondition};
use pulsesync::io::{
    read_agent_csv, read_metric_csv, read_summary, read_sweep_csv, write_config, write_run_outputs,
};
use pulsesync::metrics::{compare_methods, AnalysisParams, Trace};
use pulsesync::network::{EventKind, NetworkConfig, TopologyEvent};
use pulsesync::phase::{circ_dist, containing_arc, splay_error, Phase};
use pulsesync::AgentId;

const TOL: f64 = 1e-9;

/// Collects named failures for one criterion and prints exactly one
/// PASS/FAIL line before (on failure) panicking with the details.
struct Criterion {
    n: u32,
    failures: Vec<String>,
}

impl Criterion {
    fn new(n: u32) -> Criterion {
        Criterion {
            n,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self, note: &str) {
        if self.failures.is_empty() {
            println!("criterion {}: PASS — {note}", self.n);
        } else {
            println!("criterion {}: FAIL — {}", self.n, self.failures.join("; "));
            panic!("criterion {} failed: {}", self.n, self.failures.join("; "));
        }
    }
}

/// The reference synchronization task: six agents, worst-case equally
/// spaced start, gain 0.5, full-speed turning, lossless default network.
fn sync_reference() -> ExperimentConfig {
    ExperimentConfig {
        n_agents: 6,
        coupling: CouplingConfig {
            mode: CouplingMode::Sync,
            gain: 0.5,
        },
        method: ActuationMethod::default_optimized_spin(),
        network: NetworkConfig::default(),
        init: InitCondition::EquallySpaced,
        dt: 0.05,
        t_end: 120.0,
        seed: 42,
        heading_noise_std: 0.0,
        analysis: AnalysisParams::default(),
    }
}

/// The reference desynchronization task: the same network started from the
/// opposite worst case (all headings identical), judged at a 0.10 rad
/// threshold.
fn desync_reference() -> ExperimentConfig {
    ExperimentConfig {
        coupling: CouplingConfig {
            mode: CouplingMode::Desync,
            gain: 0.5,
        },
        init: InitCondition::Identical { angle: Phase::ZERO },
        analysis: AnalysisParams {
            epsilon: 0.10,
            ..AnalysisParams::default()
        },
        ..sync_reference()
    }
}

/// Brute-force containing arc: for every anchor point, the farthest
/// forward distance to any other point; the answer is the best anchor.
fn oracle_containing_arc(phases: &[f64]) -> f64 {
    if phases.len() <= 1 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for &start in phases {
        let mut reach = 0.0f64;
        for &p in phases {
            reach = reach.max((p - start).rem_euclid(TAU));
        }
        best = best.min(reach);
    }
    best
}

/// Brute-force splay error for pairwise-distinct phases: each point's
/// forward gap is its smallest positive forward distance to another point.
fn oracle_splay_error(phases: &[f64]) -> f64 {
    let n = phases.len();
    if n <= 1 {
        return 0.0;
    }
    let target = TAU / n as f64;
    let mut sum = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        let mut gap = TAU;
        for (j, &q) in phases.iter().enumerate() {
            if j != i {
                gap = gap.min((q - p).rem_euclid(TAU));
            }
        }
        sum += (gap - target).abs();
    }
    sum
}

fn wrap(x: f64) -> Phase {
    Phase::wrap(x).expect("finite angle must wrap")
}

#[test]
fn criterion_1_circular_arithmetic_matches_brute_force_oracles() {
    let start = Instant::now();
    let mut c = Criterion::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ACCE001);
    let mut max_arc_dev = 0.0f64;
    let mut max_splay_dev = 0.0f64;

    for iter in 0..1000 {
        // Scalar invariants: wrapping and circular distance.
        let x = rng.random_range(-20.0..20.0);
        let w = wrap(x);
        c.check(
            (0.0..TAU).contains(&w.radians()),
            format!("iter {iter}: wrap({x}) out of [0, 2*pi)"),
        );
        c.check(
            wrap(w.radians()).radians() == w.radians(),
            format!("iter {iter}: wrap not idempotent at {x}"),
        );
        let k = rng.random_range(-3i32..=3) as f64;
        c.check(
            (wrap(x + k * TAU).radians() - w.radians()).abs() < TOL,
            format!("iter {iter}: wrap not 2*pi-periodic at {x} + {k} turns"),
        );

        let a = wrap(rng.random_range(0.0..TAU));
        let b = wrap(rng.random_range(0.0..TAU));
        let d = circ_dist(a, b).radians();
        c.check(
            -PI < d && d <= PI,
            format!("iter {iter}: circ_dist out of (-pi, pi]: {d}"),
        );
        c.check(
            circ_dist(a, a).radians() == 0.0,
            format!("iter {iter}: circ_dist(a, a) != 0"),
        );
        if (d.abs() - PI).abs() > 1e-12 {
            c.check(
                circ_dist(b, a).radians() == -d,
                format!("iter {iter}: circ_dist not exactly antisymmetric off the tie"),
            );
        }
        let reached = a.rotated(d).radians();
        c.check(
            (reached - b.radians()).abs() < TOL || (reached - b.radians()).abs() > TAU - TOL,
            format!("iter {iter}: rotating by circ_dist does not land on the target"),
        );

        // Vector instance, N <= 8, pairwise distinct with probability one.
        let n = rng.random_range(1..=8usize);
        let phases: Vec<Phase> = (0..n).map(|_| wrap(rng.random_range(0.0..TAU))).collect();
        let raw: Vec<f64> = phases.iter().map(|p| p.radians()).collect();
        let arc = containing_arc(&phases).expect("nonempty input").radians();
        let splay = splay_error(&phases).expect("nonempty input").radians();

        let arc_dev = (arc - oracle_containing_arc(&raw)).abs();
        let splay_dev = (splay - oracle_splay_error(&raw)).abs();
        max_arc_dev = max_arc_dev.max(arc_dev);
        max_splay_dev = max_splay_dev.max(splay_dev);
        c.check(
            arc_dev <= TOL,
            format!("iter {iter}: containing_arc deviates from oracle by {arc_dev:e}"),
        );
        c.check(
            splay_dev <= TOL,
            format!("iter {iter}: splay_error deviates from oracle by {splay_dev:e}"),
        );
        c.check(
            (0.0..TAU).contains(&arc),
            format!("iter {iter}: containing_arc out of [0, 2*pi): {arc}"),
        );
        c.check(
            (0.0..=2.0 * TAU).contains(&splay),
            format!("iter {iter}: splay_error out of [0, 4*pi]: {splay}"),
        );

        // Rotation and permutation invariance of both metrics.
        let delta = rng.random_range(-10.0..10.0);
        let mut moved: Vec<Phase> = phases.iter().map(|p| p.rotated(delta)).collect();
        moved.shuffle(&mut rng);
        let arc2 = containing_arc(&moved).expect("nonempty input").radians();
        let splay2 = splay_error(&moved).expect("nonempty input").radians();
        c.check(
            (arc - arc2).abs() <= TOL,
            format!("iter {iter}: containing_arc not rotation/permutation invariant"),
        );
        c.check(
            (splay - splay2).abs() <= TOL,
            format!("iter {iter}: splay_error not rotation/permutation invariant"),
        );

        // Degenerate and ideal shapes with closed-form values.
        let angle = wrap(rng.random_range(0.0..TAU));
        let identical = vec![angle; n];
        let id_arc = containing_arc(&identical)
            .expect("nonempty input")
            .radians();
        let id_splay = splay_error(&identical).expect("nonempty input").radians();
        let id_splay_expect = 2.0 * TAU * (n as f64 - 1.0) / n as f64;
        c.check(
            id_arc == 0.0,
            format!("iter {iter}: containing_arc of identical phases not zero"),
        );
        c.check(
            (id_splay - id_splay_expect).abs() <= TOL,
            format!("iter {iter}: splay_error of {n} identical phases not {id_splay_expect}"),
        );
        if n >= 2 {
            let ideal: Vec<Phase> = (0..n)
                .map(|k| angle.rotated(k as f64 * TAU / n as f64))
                .collect();
            let ideal_arc = containing_arc(&ideal).expect("nonempty input").radians();
            let ideal_splay = splay_error(&ideal).expect("nonempty input").radians();
            c.check(
                (ideal_arc - (TAU - TAU / n as f64)).abs() <= TOL,
                format!("iter {iter}: containing_arc of a perfect {n}-splay off closed form"),
            );
            c.check(
                ideal_splay <= TOL,
                format!("iter {iter}: splay_error of a perfect {n}-splay not zero"),
            );
        }
    }

    // Frozen spot values.
    let three = [wrap(0.0), wrap(PI / 2.0), wrap(PI)];
    c.check(
        (containing_arc(&three).expect("nonempty").radians() - PI).abs() <= TOL,
        "containing_arc({0, pi/2, pi}) != pi",
    );
    let two = [wrap(0.0), wrap(PI / 2.0)];
    c.check(
        (containing_arc(&two).expect("nonempty").radians() - PI / 2.0).abs() <= TOL,
        "containing_arc({0, pi/2}) != pi/2",
    );
    c.check(
        (splay_error(&two).expect("nonempty").radians() - PI).abs() <= TOL,
        "splay_error({0, pi/2}) != pi",
    );

    let elapsed = start.elapsed();
    c.check(
        elapsed.as_secs_f64() < 5.0,
        format!("runtime {elapsed:?} exceeds the 5 s budget"),
    );
    c.finish(&format!(
        "1000 randomized instances, max oracle deviation arc {max_arc_dev:.1e} / splay {max_splay_dev:.1e}, {elapsed:?}"
    ));
}

#[test]
fn criterion_2_fixed_points_are_stationary_for_60_seconds() {
    let start = Instant::now();
    let mut c = Criterion::new(2);

    // Synchronized fixed point: identical headings under the sync rule.
    let mut config = sync_reference();
    config.init = InitCondition::Identical { angle: wrap(1.0) };
    config.t_end = 60.0;
    let (trace, _) = run(&config).expect("sync fixed-point run");
    let mut max_metric = 0.0f64;
    let mut max_cmd = 0.0f64;
    for r in &trace.records {
        max_metric = max_metric.max(r.metric.radians());
        for resp in &r.responses {
            max_cmd = max_cmd.max(resp.commanded.radians().abs());
        }
    }
    c.check(
        max_metric < 1e-6,
        format!("sync fixed point drifted: max containing arc {max_metric:e}"),
    );
    c.check(
        max_cmd <= TOL,
        format!("sync fixed point commanded nonzero turns: max {max_cmd:e}"),
    );
    let first = &trace.records[0];
    let last = trace.records.last().expect("nonempty trace");
    for (s0, s1) in first.phases.iter().zip(&last.phases) {
        c.check(
            (s0.phase.radians() - s1.phase.radians()).abs() <= TOL,
            format!("sync fixed point moved agent {}", s0.id),
        );
    }

    // Splay fixed point: a perfect splay under the desync rule, with every
    // phase table already complete (the steady state after any full round).
    let mut config = desync_reference();
    config.init = InitCondition::EquallySpaced;
    config.t_end = 60.0;
    let mut sim = init_experiment(&config).expect("desync fixed-point init");
    sim.prime_full_tables();
    while sim.t() < config.t_end - 1e-9 {
        sim.step();
    }
    let trace = sim.into_trace();
    let mut max_metric = 0.0f64;
    let mut max_cmd = 0.0f64;
    for r in &trace.records {
        max_metric = max_metric.max(r.metric.radians());
        for resp in &r.responses {
            max_cmd = max_cmd.max(resp.commanded.radians().abs());
        }
    }
    c.check(
        max_metric < 1e-6,
        format!("splay fixed point drifted: max splay error {max_metric:e}"),
    );
    c.check(
        max_cmd <= TOL,
        format!("splay fixed point commanded material turns: max {max_cmd:e}"),
    );
    c.check(
        trace.records.len() == 1201,
        format!(
            "expected 1201 records over 60 s, got {}",
            trace.records.len()
        ),
    );

    let elapsed = start.elapsed();
    c.check(
        elapsed.as_secs_f64() < 5.0,
        format!("runtime {elapsed:?} exceeds the 5 s budget"),
    );
    c.finish(&format!(
        "both fixed points stationary over 60 s (max metric < 1e-6), {elapsed:?}"
    ));
}

#[test]
fn criterion_3_worst_case_convergence_matches_pinned_times() {
    let mut c = Criterion::new(3);

    // (a) Sync from the equally spaced worst case.
    let (trace, summary) = run(&sync_reference()).expect("sync reference run");
    let arc0 = trace.records[0].metric.radians();
    c.check(
        (arc0 - 5.0 * PI / 3.0).abs() <= TOL,
        format!("initial containing arc {arc0} != 5*pi/3"),
    );
    match summary.convergence_time {
        Some(t) => {
            c.check(
                t <= 120.0,
                format!("sync converged only at {t} s, past the 120 s budget"),
            );
            // Pinned regression value from the reference computation.
            c.check(
                (t - 4.05).abs() <= TOL,
                format!("sync convergence time {t} drifted from pinned 4.05 s"),
            );
        }
        None => c.check(false, "sync reference did not converge".to_string()),
    }
    c.check(
        summary.rounds_to_converge == Some(9),
        format!(
            "sync rounds_to_converge {:?} != pinned Some(9)",
            summary.rounds_to_converge
        ),
    );
    let sync_t = summary.convergence_time;

    // (b) Desync from the identical-headings worst case.
    let (trace, summary) = run(&desync_reference()).expect("desync reference run");
    let splay0 = trace.records[0].metric.radians();
    c.check(
        (splay0 - 10.0 * PI / 3.0).abs() <= TOL,
        format!("initial splay error {splay0} != 10*pi/3"),
    );
    match summary.convergence_time {
        Some(t) => {
            c.check(
                t <= 120.0,
                format!("desync converged only at {t} s, past the 120 s budget"),
            );
            c.check(
                (t - 13.05).abs() <= TOL,
                format!("desync convergence time {t} drifted from pinned 13.05 s"),
            );
        }
        None => c.check(false, "desync reference did not converge".to_string()),
    }
    c.check(
        summary.rounds_to_converge == Some(27),
        format!(
            "desync rounds_to_converge {:?} != pinned Some(27)",
            summary.rounds_to_converge
        ),
    );

    c.finish(&format!(
        "sync {:?} s / 9 rounds, desync {:?} s / 27 rounds, both as pinned",
        sync_t, summary.convergence_time
    ));
}

#[test]
fn criterion_4_network_recovers_from_agent_failure() {
    let mut c = Criterion::new(4);

    let mut config = desync_reference();
    config.network.topology_events = vec![TopologyEvent {
        time: 30.0,
        agent: AgentId(4),
        kind: EventKind::Fail,
    }];
    let (trace, _) = run(&config).expect("dropout run");
    let eps = config.analysis.epsilon;

    let before = trace
        .records
        .iter()
        .rfind(|r| r.t < 30.0 - 1e-9)
        .expect("records before the failure");
    c.check(
        before.metric.radians() < eps,
        format!(
            "network had not converged before the failure: metric {} at t = {}",
            before.metric.radians(),
            before.t
        ),
    );
    c.check(
        before.live_count() == 6,
        format!(
            "expected 6 live agents before the failure, got {}",
            before.live_count()
        ),
    );

    let mut peak_after = 0.0f64;
    for r in trace.records.iter().filter(|r| r.t >= 30.0 - 1e-9) {
        c.check(
            r.live_count() == 5,
            format!("live_count {} != 5 at t = {}", r.live_count(), r.t),
        );
        let dead = r
            .phases
            .iter()
            .find(|s| s.id == AgentId(4))
            .expect("failed agent stays in the roster");
        c.check(!dead.alive, format!("agent 4 still alive at t = {}", r.t));
        if r.t <= 90.0 + 1e-9 {
            peak_after = peak_after.max(r.metric.radians());
        }
        // The recorded metric is the splay error of the survivors alone.
        let recomputed = splay_error(&r.live_phases())
            .expect("live phases")
            .radians();
        c.check(
            (recomputed - r.metric.radians()).abs() <= TOL,
            format!("metric at t = {} is not the five-agent splay error", r.t),
        );
    }
    c.check(
        peak_after >= eps,
        format!("metric never rose above {eps} after the failure (peak {peak_after})"),
    );

    // Re-converged within 60 additional seconds: from t = 90 on, the
    // five-agent splay error stays below threshold for the rest of the run.
    let mut worst_tail = 0.0f64;
    for r in trace.records.iter().filter(|r| r.t >= 90.0 - 1e-9) {
        worst_tail = worst_tail.max(r.metric.radians());
    }
    c.check(
        worst_tail < eps,
        format!("five-agent splay error still {worst_tail} at/after t = 90"),
    );

    c.finish(&format!(
        "failure at 30 s: transient peak {peak_after:.3} rad over 5 agents, settled below {eps} well before t = 90"
    ));
}

#[test]
fn criterion_5_constant_frequency_is_slower_and_noisier_than_optimized_spin() {
    let start = Instant::now();
    let mut c = Criterion::new(5);

    // The reference sync task with seed-varying starts: random uniform
    // headings make the 50 seeds genuinely different trials.
    let mut base = sync_reference();
    base.init = InitCondition::RandomUniform;
    let seeds: Vec<u64> = (1..=50).collect();
    let comparison = compare_methods(&base, &seeds).expect("three-method comparison");

    let report = |label: &str| {
        comparison
            .methods
            .iter()
            .find(|m| m.method == label)
            .unwrap_or_else(|| panic!("missing method report {label}"))
    };
    let os = report("optimized_spin");
    let cf = report("constant_frequency");

    // Strict majority of seeds: constant_frequency at least as noisy.
    let amp_ordering = comparison
        .orderings
        .iter()
        .find(|o| o.first == "optimized_spin" && o.second == "constant_frequency")
        .expect("optimized_spin vs constant_frequency ordering");
    c.check(
        amp_ordering.frac_first_no_noisier > 0.5,
        format!(
            "amplitude(constant_frequency) >= amplitude(optimized_spin) in only {:.0}% of seeds",
            100.0 * amp_ordering.frac_first_no_noisier
        ),
    );

    // Censored mean convergence time: constant_frequency no faster.
    c.check(
        cf.convergence_time.mean >= os.convergence_time.mean,
        format!(
            "mean convergence time: constant_frequency {} < optimized_spin {}",
            cf.convergence_time.mean, os.convergence_time.mean
        ),
    );

    let elapsed = start.elapsed();
    c.check(
        elapsed.as_secs_f64() < 60.0,
        format!("runtime {elapsed:?} exceeds the 60 s budget"),
    );
    c.finish(&format!(
        "50 seeds: no-noisier fraction {:.2}, mean convergence {:.2} s vs {:.2} s, {elapsed:?}",
        amp_ordering.frac_first_no_noisier, cf.convergence_time.mean, os.convergence_time.mean
    ));
}

#[test]
fn criterion_6_gain_sweep_is_monotone_and_zero_gain_never_converges() {
    let mut c = Criterion::new(6);
    let dir = tempfile::tempdir().expect("temp dir");
    let config_path = dir.path().join("config.json");
    let out_dir = dir.path().join("sweep");
    write_config(&config_path, &desync_reference()).expect("write sweep config");

    // Drive the real subcommand end to end.
    let output = Command::new(env!("CARGO_BIN_EXE_pulsesync"))
        .args([
            "sweep",
            "--config",
            config_path.to_str().expect("utf-8 path"),
            "--out",
            out_dir.to_str().expect("utf-8 path"),
            "--gains",
            "0.25,0.5,1.0",
            "--quiet",
        ])
        .output()
        .expect("spawn sweep subcommand");
    c.check(
        output.status.code() == Some(0),
        format!(
            "sweep exited with {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        ),
    );

    let rows = read_sweep_csv(&out_dir.join("sweep.csv")).expect("parse sweep.csv");
    c.check(
        rows.len() == 3,
        format!("expected 3 sweep rows, got {}", rows.len()),
    );
    let gains: Vec<f64> = rows.iter().map(|r| r.gain).collect();
    c.check(
        gains == vec![0.25, 0.5, 1.0],
        format!("sweep gains {gains:?} != [0.25, 0.5, 1.0]"),
    );
    for r in &rows {
        c.check(
            r.convergence_time.is_some(),
            format!("gain {} did not converge within the run", r.gain),
        );
    }

    // The tradeoff direction is recorded, not presumed: accept either a
    // speedup (convergence time non-increasing in gain) or a noise cost
    // (steady-state amplitude non-decreasing in gain).
    let ct: Vec<f64> = rows
        .iter()
        .map(|r| r.convergence_time.unwrap_or(f64::MAX))
        .collect();
    let amp: Vec<f64> = rows.iter().map(|r| r.steady_state_amplitude).collect();
    let ct_non_increasing = ct.windows(2).all(|w| w[0] >= w[1] - TOL);
    let amp_non_decreasing = amp.windows(2).all(|w| w[0] <= w[1] + TOL);
    c.check(
        ct_non_increasing || amp_non_decreasing,
        format!("no monotone direction across the sweep: ct {ct:?}, amplitude {amp:?}"),
    );
    let direction = if ct_non_increasing {
        "convergence time non-increasing in gain"
    } else {
        "steady-state amplitude non-decreasing in gain"
    };

    // Control: a vanishing gain must never reach the splay state.
    let mut control = desync_reference();
    control.coupling.gain = 1e-9;
    let (_, summary) = run(&control).expect("vanishing-gain control run");
    c.check(
        summary.convergence_time.is_none(),
        format!(
            "vanishing gain converged at {:?} despite applying no meaningful coupling",
            summary.convergence_time
        ),
    );
    c.check(
        summary.final_metric > 1.0,
        format!(
            "vanishing gain still reduced the splay error to {}",
            summary.final_metric
        ),
    );

    c.finish(&format!(
        "sweep over {gains:?}: {direction}; vanishing-gain control stayed at splay error {:.3}",
        summary.final_metric
    ));
}

#[test]
fn criterion_7_runs_are_byte_deterministic_and_artifacts_cross_validate() {
    let mut c = Criterion::new(7);

    // A config that exercises every randomness source: random initial
    // headings, packet loss, and heading noise.
    let mut config = sync_reference();
    config.init = InitCondition::RandomUniform;
    config.network.loss_prob = 0.2;
    config.heading_noise_std = 0.01;
    config.t_end = 60.0;

    let dir = tempfile::tempdir().expect("temp dir");
    let mut emitted: Vec<(Vec<String>, std::path::PathBuf)> = Vec::new();
    let mut traces: Vec<Trace> = Vec::new();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        let (trace, summary) = run(&config).expect("deterministic run");
        let files = write_run_outputs(&out, &trace, &summary).expect("write outputs");
        emitted.push((files, out));
        traces.push(trace);
    }
    c.check(
        traces[0] == traces[1],
        "two runs of the same (config, seed) produced different traces".to_string(),
    );
    c.check(
        emitted[0].0 == emitted[1].0,
        "the two runs emitted different file lists".to_string(),
    );
    for name in &emitted[0].0 {
        let bytes_a = std::fs::read(emitted[0].1.join(name)).expect("read first copy");
        let bytes_b = std::fs::read(emitted[1].1.join(name)).expect("read second copy");
        c.check(
            bytes_a == bytes_b,
            format!("{name} differs byte-for-byte between identical runs"),
        );
    }

    // Re-parse one copy and cross-validate the combined series against the
    // per-agent files: times line up, live counts agree, and the metric
    // recomputes from the parsed phases within 1e-9.
    let out = &emitted[0].1;
    let metric_rows = read_metric_csv(&out.join("metric.csv")).expect("parse metric.csv");
    let ids: Vec<u32> = (1..=config.n_agents).collect();
    let agent_rows: Vec<_> = ids
        .iter()
        .map(|id| read_agent_csv(&out.join(format!("agent_{id}.csv"))).expect("parse agent csv"))
        .collect();
    for rows in &agent_rows {
        c.check(
            rows.len() == metric_rows.len(),
            format!(
                "agent file has {} rows, metric.csv {}",
                rows.len(),
                metric_rows.len()
            ),
        );
    }
    let mut max_dev = 0.0f64;
    for (i, m) in metric_rows.iter().enumerate() {
        let mut live = Vec::new();
        for rows in &agent_rows {
            let row = rows[i];
            c.check(
                row.t == m.t,
                format!("row {i}: agent t {} != metric t {}", row.t, m.t),
            );
            if row.alive {
                live.push(Phase::wrap(row.phase).expect("parsed phase wraps"));
            }
        }
        c.check(
            live.len() == m.live_count as usize,
            format!(
                "row {i}: {} alive flags vs live_count {}",
                live.len(),
                m.live_count
            ),
        );
        if m.live_count == 0 {
            continue;
        }
        let recomputed = containing_arc(&live).expect("live phases").radians();
        let dev = (recomputed - m.metric).abs();
        max_dev = max_dev.max(dev);
        c.check(
            dev <= TOL,
            format!(
                "row {i}: metric {} vs recomputed {} (dev {dev:e})",
                m.metric, recomputed
            ),
        );
    }

    // The summary file also reloads to exactly the in-memory values.
    let (_, summary) = run(&config).expect("third identical run");
    let reloaded = read_summary(&out.join("summary.json")).expect("parse summary.json");
    c.check(
        reloaded == summary,
        "summary.json does not reload to the computed summary".to_string(),
    );

    c.finish(&format!(
        "byte-identical reruns across {} files; metric recomputes from agent files with max deviation {max_dev:.1e}",
        emitted[0].0.len()
    ));
}
