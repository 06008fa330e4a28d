//! The deterministic simulation loop.
//!
//! Time advances in fixed ticks of `dt`. Each tick, in a fixed order:
//! in-progress turns advance, a broadcast slot fires if one ends in the
//! tick, scheduled failures/joins apply, and one trace record is appended.
//! Every piece of randomness (initial phases, heading noise, packet loss)
//! comes from one seeded generator, so a `(config, seed)` pair fully
//! determines the run, byte for byte.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::actuation::{plan_turn, ActuationMethod, TurnProfile};
use crate::coupling::{desync_response, sync_response, CouplingConfig, CouplingMode, PhaseTable};
use crate::error::{Error, Result};
use crate::metrics::{
    summarize, AgentSample, AnalysisParams, ResponseRecord, Summary, Trace, TraceRecord,
};
use crate::network::{deliver, next_broadcaster, Broadcast, EventKind, NetworkConfig};
use crate::phase::{containing_arc, splay_error, ArcMetric, Phase};
use crate::AgentId;

/// Default integration step: ten ticks per default slot, fine enough that
/// turn-completion quantization sits far below the metric tolerances.
pub const DEFAULT_DT: f64 = 0.05;

/// Slack when comparing tick times against slot/event times, all of which
/// are products of small integers with step sizes.
const EPS_TIME: f64 = 1e-9;

/// How initial headings are assigned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitCondition {
    /// Agent i starts at 2πi/N — the worst case for synchronization.
    EquallySpaced,
    /// Everyone starts at one angle — the worst case for desynchronization.
    Identical { angle: Phase },
    /// Caller-supplied headings, one per agent.
    Explicit { phases: Vec<Phase> },
    /// Independent uniform draws on [0, 2π) from the run's seed.
    RandomUniform,
}

/// Complete, seeded description of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_agents: u32,
    pub coupling: CouplingConfig,
    pub method: ActuationMethod,
    #[serde(default)]
    pub network: NetworkConfig,
    pub init: InitCondition,
    /// Integration step, seconds.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Simulated duration, seconds.
    pub t_end: f64,
    pub seed: u64,
    /// Std-dev of Gaussian noise on each broadcast heading, radians.
    #[serde(default)]
    pub heading_noise_std: f64,
    #[serde(default)]
    pub analysis: AnalysisParams,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 1 {
            return Err(Error::invalid_config("n_agents", "must be >= 1"));
        }
        self.coupling.validate()?;
        self.method.validate()?;
        self.network.validate()?;
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::invalid_config(
                "dt",
                format!("must be finite and > 0, got {}", self.dt),
            ));
        }
        if self.dt > self.network.slot_period {
            return Err(Error::invalid_config(
                "dt",
                format!(
                    "must not exceed slot_period ({} > {})",
                    self.dt, self.network.slot_period
                ),
            ));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::invalid_config(
                "t_end",
                format!("must be finite and > 0, got {}", self.t_end),
            ));
        }
        if self.t_end < self.network.slot_period {
            return Err(Error::invalid_config(
                "t_end",
                format!(
                    "must cover at least one slot ({} < {})",
                    self.t_end, self.network.slot_period
                ),
            ));
        }
        if let InitCondition::Explicit { phases } = &self.init {
            if phases.len() != self.n_agents as usize {
                return Err(Error::invalid_config(
                    "init",
                    format!(
                        "explicit phase list has {} entries for {} agents",
                        phases.len(),
                        self.n_agents
                    ),
                ));
            }
        }
        if !self.heading_noise_std.is_finite() || self.heading_noise_std < 0.0 {
            return Err(Error::invalid_config(
                "heading_noise_std",
                format!("must be finite and >= 0, got {}", self.heading_noise_std),
            ));
        }
        self.analysis.validate()?;

        // Replay the topology schedule against the evolving live set so an
        // impossible Fail/Join is rejected before any stepping happens.
        let mut live: std::collections::BTreeSet<AgentId> =
            (1..=self.n_agents).map(AgentId).collect();
        for e in &self.network.topology_events {
            match e.kind {
                EventKind::Fail => {
                    if !live.remove(&e.agent) {
                        return Err(Error::InvalidEvent(format!(
                            "fail at t={} targets agent {} which is not live then",
                            e.time, e.agent
                        )));
                    }
                }
                EventKind::Join { .. } => {
                    if !live.insert(e.agent) {
                        return Err(Error::InvalidEvent(format!(
                            "join at t={} targets agent {} which is already live then",
                            e.time, e.agent
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One agent's complete runtime state.
#[derive(Clone, Debug)]
pub struct AgentState {
    pub id: AgentId,
    pub phase: Phase,
    /// In-progress rotation, if any. Always `None` for a dead agent.
    pub profile: Option<TurnProfile>,
    pub table: PhaseTable,
    pub alive: bool,
}

impl AgentState {
    fn new(id: AgentId, phase: Phase) -> AgentState {
        AgentState {
            id,
            phase,
            profile: None,
            table: PhaseTable::new(id, phase),
            alive: true,
        }
    }
}

/// A running experiment: agents, clocks, generator, and the trace so far.
#[derive(Clone, Debug)]
pub struct SimState {
    config: ExperimentConfig,
    /// Ascending by id; grows when new agents join.
    agents: Vec<AgentState>,
    /// Ticks completed so far.
    step_index: u64,
    /// Broadcast slots fired so far.
    fired_slots: u64,
    /// Cursor into the topology event schedule.
    next_event: usize,
    rng: ChaCha8Rng,
    trace: Trace,
}

/// Build the initial state: phases per the init rule, every table primed
/// with its own entry only, slot clock at zero, and the t = 0 record
/// already in the trace.
pub fn init_experiment(config: &ExperimentConfig) -> Result<SimState> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_agents as usize;
    let phases: Vec<Phase> = match &config.init {
        InitCondition::EquallySpaced => (0..n)
            .map(|i| Phase::wrap(TAU * i as f64 / n as f64).expect("finite spacing"))
            .collect(),
        InitCondition::Identical { angle } => vec![*angle; n],
        InitCondition::Explicit { phases } => phases.clone(),
        InitCondition::RandomUniform => (0..n)
            .map(|_| Phase::wrap(rng.random_range(0.0..TAU)).expect("finite draw"))
            .collect(),
    };
    let agents: Vec<AgentState> = phases
        .iter()
        .enumerate()
        .map(|(i, &phase)| AgentState::new(AgentId(i as u32 + 1), phase))
        .collect();

    let mut state = SimState {
        config: config.clone(),
        agents,
        step_index: 0,
        fired_slots: 0,
        next_event: 0,
        rng,
        trace: Trace::default(),
    };
    state.push_record(0.0, None, Vec::new(), Vec::new());
    Ok(state)
}

/// Execute a full experiment: step from t = 0 to t_end (or until the
/// network dies) and summarize the trace.
pub fn run(config: &ExperimentConfig) -> Result<(Trace, Summary)> {
    let mut state = init_experiment(config)?;
    // Relative slack so near-integer quotients of awkward step sizes
    // (120 / 0.05 lands just under 2400) round to the intended tick count.
    let q = config.t_end / config.dt;
    let n_steps = (q + q * 1e-12 + EPS_TIME).floor() as u64;
    for _ in 0..n_steps {
        state.step();
        if state.trace.truncated {
            break;
        }
    }
    let summary = summarize(&state.trace, &config.analysis, config.network.slot_period)?;
    Ok((state.into_trace(), summary))
}

impl SimState {
    /// Current simulation time, seconds.
    pub fn t(&self) -> f64 {
        self.step_index as f64 * self.config.dt
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    /// Ids of the currently live agents, ascending.
    pub fn live_ids(&self) -> Vec<AgentId> {
        self.agents
            .iter()
            .filter(|a| a.alive)
            .map(|a| a.id)
            .collect()
    }

    /// Give every live agent a current entry for every other live agent —
    /// the state of full, fresh knowledge reached after one lossless round
    /// in which nobody moved. Fixed-point probes start here, bypassing the
    /// bootstrap transient of own-only tables.
    pub fn prime_full_tables(&mut self) {
        let t = self.t();
        let live: Vec<(AgentId, Phase)> = self
            .agents
            .iter()
            .filter(|a| a.alive)
            .map(|a| (a.id, a.phase))
            .collect();
        for agent in &mut self.agents {
            if !agent.alive {
                continue;
            }
            for &(id, phase) in &live {
                agent.table.record(id, phase, t);
            }
        }
    }

    /// Advance one tick. No-op once the trace is truncated.
    pub fn step(&mut self) {
        if self.trace.truncated {
            return;
        }
        let dt = self.config.dt;
        let t_next = (self.step_index + 1) as f64 * dt;
        let mut events: Vec<String> = Vec::new();
        let mut responses: Vec<ResponseRecord> = Vec::new();
        let mut broadcaster: Option<AgentId> = None;

        // (1) In-progress turns advance through this tick.
        for agent in &mut self.agents {
            if let Some(profile) = &mut agent.profile {
                let executed = profile.advance(dt);
                if executed != 0.0 {
                    agent.phase = agent.phase.rotated(executed);
                }
                if profile.is_complete() {
                    agent.profile = None;
                }
            }
        }

        // (2) Fire the slot whose boundary falls inside this tick, if any.
        let slot_period = self.config.network.slot_period;
        while (self.fired_slots + 1) as f64 * slot_period <= t_next + EPS_TIME {
            let slot_index = self.fired_slots;
            let t_slot = (self.fired_slots + 1) as f64 * slot_period;
            self.fired_slots += 1;

            let live_ids = self.live_ids();
            if live_ids.is_empty() {
                break; // dead network; truncation is flagged at the record
            }
            let sender = next_broadcaster(slot_index, &live_ids).expect("live set checked");
            broadcaster = Some(sender);
            events.push(format!("broadcast:{sender}"));

            let sender_idx = self
                .agents
                .binary_search_by_key(&sender, |a| a.id)
                .expect("broadcaster is live");
            let mut payload = self.agents[sender_idx].phase;
            if self.config.heading_noise_std > 0.0 {
                let normal = Normal::new(0.0, self.config.heading_noise_std)
                    .expect("std validated positive");
                payload = payload.rotated(normal.sample(&mut self.rng));
            }
            let b = Broadcast {
                sender,
                payload,
                time: t_slot,
            };
            let receivers: Vec<AgentId> = live_ids
                .iter()
                .copied()
                .filter(|&id| id != sender)
                .collect();
            let delivered = deliver(&b, &receivers, self.config.network.loss_prob, &mut self.rng);

            let mode = self.config.coupling.mode;
            let gain = self.config.coupling.gain;
            let method = self.config.method;
            for id in delivered {
                let idx = self
                    .agents
                    .binary_search_by_key(&id, |a| a.id)
                    .expect("receiver is live");
                let agent = &mut self.agents[idx];
                agent.table.record(sender, payload, t_slot);
                agent.table.set_own(agent.phase, t_slot);
                let delta = match mode {
                    CouplingMode::Sync => sync_response(agent.phase, payload, gain),
                    CouplingMode::Desync => desync_response(id, &agent.table, gain),
                }
                .expect("gain validated, own entry present");
                let profile = plan_turn(delta, method).expect("method validated");
                responses.push(ResponseRecord {
                    agent: id,
                    commanded: delta,
                    clamped: profile.clamped,
                });
                if profile.clamped {
                    events.push(format!("clamp:{id}"));
                }
                // Preempt whatever the agent was doing; a zero response
                // simply stops it.
                agent.profile = if profile.is_complete() {
                    None
                } else {
                    Some(profile)
                };
            }
        }

        // (3) Scheduled failures and joins whose time falls in this tick.
        while self.next_event < self.config.network.topology_events.len()
            && self.config.network.topology_events[self.next_event].time <= t_next + EPS_TIME
        {
            let e = self.config.network.topology_events[self.next_event];
            self.next_event += 1;
            match e.kind {
                EventKind::Fail => {
                    let idx = self
                        .agents
                        .binary_search_by_key(&e.agent, |a| a.id)
                        .expect("schedule validated");
                    self.agents[idx].alive = false;
                    self.agents[idx].profile = None;
                    // Survivors forget the dead agent so stale entries
                    // cannot steer later desync responses.
                    for agent in &mut self.agents {
                        if agent.alive {
                            agent.table.forget(e.agent);
                        }
                    }
                    events.push(format!("fail:{}", e.agent));
                }
                EventKind::Join { initial_phase } => {
                    match self.agents.binary_search_by_key(&e.agent, |a| a.id) {
                        Ok(idx) => {
                            // A previously failed id rejoins afresh.
                            let agent = &mut self.agents[idx];
                            agent.alive = true;
                            agent.phase = initial_phase;
                            agent.profile = None;
                            agent.table = PhaseTable::new(e.agent, initial_phase);
                        }
                        Err(pos) => self
                            .agents
                            .insert(pos, AgentState::new(e.agent, initial_phase)),
                    }
                    events.push(format!("join:{}", e.agent));
                }
            }
        }

        // (4) One record per tick, always.
        self.step_index += 1;
        self.push_record(t_next, broadcaster, responses, events);
    }

    fn push_record(
        &mut self,
        t: f64,
        broadcaster: Option<AgentId>,
        responses: Vec<ResponseRecord>,
        events: Vec<String>,
    ) {
        let samples: Vec<AgentSample> = self
            .agents
            .iter()
            .map(|a| AgentSample {
                id: a.id,
                phase: a.phase,
                alive: a.alive,
            })
            .collect();
        let live: Vec<Phase> = self
            .agents
            .iter()
            .filter(|a| a.alive)
            .map(|a| a.phase)
            .collect();
        let metric = if live.is_empty() {
            ArcMetric::from_radians(0.0)
        } else {
            match self.config.coupling.mode {
                CouplingMode::Sync => containing_arc(&live),
                CouplingMode::Desync => splay_error(&live),
            }
            .expect("live set nonempty")
        };
        self.trace.records.push(TraceRecord {
            t,
            phases: samples,
            metric,
            broadcaster,
            responses,
            events,
        });
        if live.is_empty() {
            self.trace.truncated = true;
        }
    }
}
