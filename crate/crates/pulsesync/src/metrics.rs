//! Trace recording and the statistics derived from a finished run:
//! convergence time, steady-state oscillation amplitude, and side-by-side
//! comparison of the three actuation methods.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actuation::ActuationMethod;
use crate::engine::ExperimentConfig;
use crate::error::{Error, Result};
use crate::phase::{ArcMetric, Phase, PhaseDelta};
use crate::AgentId;

/// One agent's row within a trace record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentSample {
    pub id: AgentId,
    pub phase: Phase,
    pub alive: bool,
}

/// A coupling response planned at this tick: which agent, what it was
/// commanded (pre-clamp), and whether actuation truncated it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResponseRecord {
    pub agent: AgentId,
    pub commanded: PhaseDelta,
    pub clamped: bool,
}

/// Snapshot of the whole network at the end of one tick.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    /// Tick time in seconds.
    pub t: f64,
    /// Every agent ever seen, in ascending id order, dead ones included
    /// (flagged and frozen at their last heading).
    pub phases: Vec<AgentSample>,
    /// Mode-appropriate state error over the live agents: containing arc
    /// for sync, splay error for desync. Zero when nobody is left alive.
    pub metric: ArcMetric,
    /// Which agent transmitted this tick, if a slot boundary fell in it.
    pub broadcaster: Option<AgentId>,
    /// Responses planned this tick (one per agent that heard the slot's
    /// broadcast), in ascending agent id order.
    pub responses: Vec<ResponseRecord>,
    /// Human-readable event tags: `broadcast:<id>`, `fail:<id>`,
    /// `join:<id>`, `clamp:<id>`.
    pub events: Vec<String>,
}

impl TraceRecord {
    pub fn live_count(&self) -> usize {
        self.phases.iter().filter(|s| s.alive).count()
    }

    /// Phases of the live agents, in id order.
    pub fn live_phases(&self) -> Vec<Phase> {
        self.phases
            .iter()
            .filter(|s| s.alive)
            .map(|s| s.phase)
            .collect()
    }
}

/// The full time series of one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    /// True when the run ended early because every agent had failed.
    pub truncated: bool,
}

impl Trace {
    /// Records that still have at least one live agent; the degenerate
    /// all-dead tail of a truncated run carries no meaningful metric.
    fn live_records(&self) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(|r| r.live_count() > 0)
    }
}

/// Headline numbers for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Earliest time from which the metric held below epsilon, or null.
    pub convergence_time: Option<f64>,
    /// The same instant counted in broadcast slots, or null.
    pub rounds_to_converge: Option<u64>,
    /// Max−min of the metric over the trace tail.
    pub steady_state_amplitude: f64,
    /// Metric at the last instant with a live agent.
    pub final_metric: f64,
    /// True when the run ended early with no live agents.
    pub truncated: bool,
}

/// Analysis knobs applied when a run is summarized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisParams {
    /// Convergence threshold on the metric, radians.
    pub epsilon: f64,
    /// How long the metric must stay below epsilon, seconds.
    pub hold: f64,
    /// Final fraction of records used for the steady-state amplitude.
    pub tail_fraction: f64,
}

impl Default for AnalysisParams {
    fn default() -> AnalysisParams {
        AnalysisParams {
            epsilon: 0.05,
            hold: 5.0,
            tail_fraction: 0.25,
        }
    }
}

impl AnalysisParams {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::invalid_config("epsilon", "must be > 0"));
        }
        if !self.hold.is_finite() || self.hold < 0.0 {
            return Err(Error::invalid_config("hold", "must be >= 0"));
        }
        if !self.tail_fraction.is_finite() || self.tail_fraction <= 0.0 || self.tail_fraction > 1.0
        {
            return Err(Error::invalid_config("tail_fraction", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Slack for comparing times that are sums of dt/slot_period multiples.
const TIME_TOL: f64 = 1e-9;

/// Earliest `t` such that the metric is below `epsilon` at every record in
/// `[t, t + hold]`, with that window fully inside the trace. `None` when no
/// such window exists.
pub fn convergence_time(trace: &Trace, epsilon: f64, hold: f64) -> Result<Option<f64>> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    if !hold.is_finite() || hold < 0.0 {
        return Err(Error::InvalidInput(format!(
            "hold must be >= 0, got {hold}"
        )));
    }
    let records: Vec<&TraceRecord> = trace.live_records().collect();
    let n = records.len();
    if n == 0 {
        return Err(Error::InvalidInput("trace has no records".into()));
    }

    // next_bad[i]: smallest j >= i whose metric breaks epsilon, or n.
    let mut next_bad = vec![n; n + 1];
    for i in (0..n).rev() {
        next_bad[i] = if records[i].metric.radians() >= epsilon {
            i
        } else {
            next_bad[i + 1]
        };
    }

    let last_t = records[n - 1].t;
    let mut end = 0; // first index past the hold window of `start`
    for start in 0..n {
        if records[start].t + hold > last_t + TIME_TOL {
            break; // window would hang past the end of the trace
        }
        if end < start {
            end = start;
        }
        while end < n && records[end].t <= records[start].t + hold + TIME_TOL {
            end += 1;
        }
        if next_bad[start] >= end {
            return Ok(Some(records[start].t));
        }
    }
    Ok(None)
}

/// Max−min of the metric over the final `tail_fraction` of live records.
pub fn steady_state_amplitude(trace: &Trace, tail_fraction: f64) -> Result<f64> {
    if !tail_fraction.is_finite() || tail_fraction <= 0.0 || tail_fraction > 1.0 {
        return Err(Error::InvalidInput(format!(
            "tail_fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let records: Vec<&TraceRecord> = trace.live_records().collect();
    if records.is_empty() {
        return Err(Error::InvalidInput("trace has no records".into()));
    }
    let n_tail = ((records.len() as f64 * tail_fraction).ceil() as usize).max(1);
    let tail = &records[records.len() - n_tail..];
    let max = tail
        .iter()
        .map(|r| r.metric.radians())
        .fold(f64::NEG_INFINITY, f64::max);
    let min = tail
        .iter()
        .map(|r| r.metric.radians())
        .fold(f64::INFINITY, f64::min);
    Ok(max - min)
}

/// Summarize a finished trace under the given analysis parameters.
pub fn summarize(trace: &Trace, analysis: &AnalysisParams, slot_period: f64) -> Result<Summary> {
    analysis.validate()?;
    let ct = convergence_time(trace, analysis.epsilon, analysis.hold)?;
    // Count in whole broadcast slots, tolerating float noise just under a
    // slot boundary.
    let rounds = ct.map(|t| (t / slot_period - 1e-6).ceil().max(0.0) as u64);
    let amplitude = steady_state_amplitude(trace, analysis.tail_fraction)?;
    let final_metric = trace
        .live_records()
        .last()
        .map(|r| r.metric.radians())
        .unwrap_or(0.0);
    Ok(Summary {
        convergence_time: ct,
        rounds_to_converge: rounds,
        steady_state_amplitude: amplitude,
        final_metric,
        truncated: trace.truncated,
    })
}

/// Mean/min/max of a statistic across seeds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRange {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl StatRange {
    fn over(values: impl Iterator<Item = f64> + Clone) -> StatRange {
        let mut n = 0usize;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            n += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        StatRange {
            mean: sum / n as f64,
            min,
            max,
        }
    }
}

/// One run's headline numbers within a comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub seed: u64,
    pub convergence_time: Option<f64>,
    pub steady_state_amplitude: f64,
}

/// All seeds' outcomes for one actuation method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    /// Seeds whose run converged at all.
    pub converged: usize,
    /// Stats over convergence times, non-converged runs censored at t_end.
    pub convergence_time: StatRange,
    pub steady_state_amplitude: StatRange,
    pub outcomes: Vec<MethodOutcome>,
}

/// How often one method beat another, seed by seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairOrdering {
    pub first: String,
    pub second: String,
    /// Fraction of seeds where `first` converged no later than `second`
    /// (non-converged runs censored at t_end).
    pub frac_first_no_slower: f64,
    /// Fraction of seeds where `first`'s steady-state amplitude was no
    /// larger than `second`'s.
    pub frac_first_no_noisier: f64,
}

/// Three-method comparison over a shared base config and seed list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub seeds: Vec<u64>,
    /// Censoring horizon used for non-converged convergence times.
    pub t_end: f64,
    /// Reports in fixed order: optimized_spin, constant_time,
    /// constant_frequency.
    pub methods: Vec<MethodReport>,
    /// Pairwise fractions in fixed order: (optimized_spin, constant_time),
    /// (optimized_spin, constant_frequency), (constant_time,
    /// constant_frequency).
    pub orderings: Vec<PairOrdering>,
}

/// Run `base` under each of the three actuation methods (at their reference
/// parameters) for every seed, and tabulate the results side by side.
///
/// The base config's own `method` and `seed` fields are overridden per run.
/// Runs are independent, so they execute in parallel; the output is a pure
/// function of `(base, seeds)` regardless of scheduling.
pub fn compare_methods(base: &ExperimentConfig, seeds: &[u64]) -> Result<MethodComparison> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("seed list must be nonempty".into()));
    }
    let methods = [
        ActuationMethod::default_optimized_spin(),
        ActuationMethod::default_constant_time(),
        ActuationMethod::default_constant_frequency(),
    ];

    // One flat job per (method, seed); collected results keep this order.
    let jobs: Vec<(usize, u64)> = methods
        .iter()
        .enumerate()
        .flat_map(|(mi, _)| seeds.iter().map(move |&s| (mi, s)))
        .collect();
    let outcomes: Vec<Result<MethodOutcome>> = jobs
        .par_iter()
        .map(|&(mi, seed)| {
            let mut config = base.clone();
            config.method = methods[mi];
            config.seed = seed;
            let (_, summary) = crate::engine::run(&config)?;
            Ok(MethodOutcome {
                seed,
                convergence_time: summary.convergence_time,
                steady_state_amplitude: summary.steady_state_amplitude,
            })
        })
        .collect();

    let mut per_method: Vec<Vec<MethodOutcome>> = vec![Vec::new(); methods.len()];
    for (&(mi, _), outcome) in jobs.iter().zip(outcomes) {
        per_method[mi].push(outcome?);
    }

    let censor = |o: &MethodOutcome| o.convergence_time.unwrap_or(base.t_end);
    let reports: Vec<MethodReport> = methods
        .iter()
        .zip(&per_method)
        .map(|(m, outcomes)| MethodReport {
            method: m.label().to_string(),
            converged: outcomes
                .iter()
                .filter(|o| o.convergence_time.is_some())
                .count(),
            convergence_time: StatRange::over(outcomes.iter().map(censor)),
            steady_state_amplitude: StatRange::over(
                outcomes.iter().map(|o| o.steady_state_amplitude),
            ),
            outcomes: outcomes.clone(),
        })
        .collect();

    let pair = |a: usize, b: usize| {
        let n = seeds.len() as f64;
        let no_slower = per_method[a]
            .iter()
            .zip(&per_method[b])
            .filter(|(x, y)| censor(x) <= censor(y))
            .count() as f64;
        let no_noisier = per_method[a]
            .iter()
            .zip(&per_method[b])
            .filter(|(x, y)| x.steady_state_amplitude <= y.steady_state_amplitude)
            .count() as f64;
        PairOrdering {
            first: methods[a].label().to_string(),
            second: methods[b].label().to_string(),
            frac_first_no_slower: no_slower / n,
            frac_first_no_noisier: no_noisier / n,
        }
    };

    Ok(MethodComparison {
        seeds: seeds.to_vec(),
        t_end: base.t_end,
        methods: reports,
        orderings: vec![pair(0, 1), pair(0, 2), pair(1, 2)],
    })
}
