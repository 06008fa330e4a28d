//! The simulated broadcast medium.
//!
//! Agents share one radio channel divided into fixed TDMA slots. Each slot,
//! exactly one live agent transmits its heading; every other live agent
//! receives it unless an independent Bernoulli loss drops that copy. The
//! rotation is round-robin over ascending ids and is recomputed against the
//! current live set, so a failed agent disappears from the schedule at the
//! very next slot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::AgentId;

/// One transmission: who sent, what heading they reported, and when.
///
/// The payload is the sender's phase at the instant of transmission — after
/// heading noise has been applied, if any is configured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Broadcast {
    pub sender: AgentId,
    pub payload: Phase,
    pub time: f64,
}

/// A scheduled change to the set of participating agents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyEvent {
    /// Simulation time at which the event applies, in seconds.
    pub time: f64,
    pub agent: AgentId,
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EventKind {
    /// The agent dies in place: it stops broadcasting, responding and
    /// counting toward metrics, but its heading stays frozen where it was.
    Fail,
    /// A new agent appears at the given heading and joins the rotation at
    /// the next slot boundary.
    Join { initial_phase: Phase },
}

/// Medium parameters: slot length, per-receiver loss, scheduled events.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    /// Length of one broadcast slot, in seconds.
    pub slot_period: f64,
    /// Probability that any single receiver misses any single broadcast.
    pub loss_prob: f64,
    /// Failure/join schedule, sorted by time.
    pub topology_events: Vec<TopologyEvent>,
}

impl Default for NetworkConfig {
    fn default() -> NetworkConfig {
        NetworkConfig {
            slot_period: 0.5,
            loss_prob: 0.0,
            topology_events: Vec::new(),
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.slot_period.is_finite() || self.slot_period <= 0.0 {
            return Err(Error::invalid_config(
                "slot_period",
                format!("must be finite and > 0, got {}", self.slot_period),
            ));
        }
        if !self.loss_prob.is_finite() || !(0.0..=1.0).contains(&self.loss_prob) {
            return Err(Error::invalid_config(
                "loss_prob",
                format!("must lie in [0, 1], got {}", self.loss_prob),
            ));
        }
        for pair in self.topology_events.windows(2) {
            if pair[1].time < pair[0].time {
                return Err(Error::invalid_config(
                    "topology_events",
                    "must be sorted by non-decreasing time",
                ));
            }
        }
        if let Some(e) = self
            .topology_events
            .iter()
            .find(|e| !e.time.is_finite() || e.time < 0.0)
        {
            return Err(Error::invalid_config(
                "topology_events",
                format!("event time must be finite and >= 0, got {}", e.time),
            ));
        }
        Ok(())
    }
}

/// Round-robin slot assignment over the current live set.
///
/// `live_ids` must be in ascending order; slot `k` goes to the
/// `(k mod |live|)`-th of them. Recomputing against the live set each slot
/// means a failure immediately reshapes the rotation.
pub fn next_broadcaster(slot_index: u64, live_ids: &[AgentId]) -> Result<AgentId> {
    if live_ids.is_empty() {
        return Err(Error::NoLiveAgents);
    }
    debug_assert!(live_ids.windows(2).all(|w| w[0] < w[1]));
    Ok(live_ids[(slot_index % live_ids.len() as u64) as usize])
}

/// Subject each receiver to independent Bernoulli loss; returns the ids
/// that actually hear the broadcast, in the order given.
///
/// A lossless network consumes no randomness, keeping lossless runs
/// byte-identical regardless of seed.
pub fn deliver<R: rand::Rng>(
    b: &Broadcast,
    receivers: &[AgentId],
    loss_prob: f64,
    rng: &mut R,
) -> Vec<AgentId> {
    debug_assert!(
        !receivers.contains(&b.sender),
        "sender cannot receive itself"
    );
    debug_assert!((0.0..=1.0).contains(&loss_prob));
    if loss_prob == 0.0 {
        return receivers.to_vec();
    }
    receivers
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() >= loss_prob)
        .collect()
}
