//! Deterministic simulator for decentralized phase synchronization and
//! desynchronization in a broadcast network of turning robots.
//!
//! Each agent owns a heading on the unit circle and hears its peers over a
//! slotted round-robin broadcast channel (one transmitter per slot, optional
//! per-receiver packet loss, optional heading noise). On every broadcast it
//! receives, an agent plans a corrective turn from a pulse-coupled-oscillator
//! rule — pursuit of the sender for synchronization, circular-neighbor
//! midpoints for desynchronization (the splay state) — scaled by a coupling
//! gain and executed through one of three actuation methods that trade turn
//! speed against duration. Mid-run topology events can freeze an agent in
//! place or add one; metrics (containing arc for sync, splay error for
//! desync) always track the live agents only.
//!
//! Everything is deterministic: a config plus a seed reproduces every
//! trajectory bit for bit, and the on-disk artifacts re-parse to the exact
//! values that were computed.
//!
//! # Layout
//!
//! - [`phase`] — circular arithmetic: wrapped angles, signed shortest arcs,
//!   and the two state-error metrics.
//! - [`coupling`] — the sync and desync response rules and per-agent phase
//!   tables.
//! - [`actuation`] — turn planning: optimized-spin, constant-time, and
//!   constant-frequency methods, with preemption-ready profiles.
//! - [`network`] — slot scheduling, lossy delivery, and topology events.
//! - [`engine`] — config validation, the tick loop, and [`engine::run`].
//! - [`metrics`] — traces, convergence/steady-state analysis, and the
//!   three-method comparison harness.
//! - [`io`] — JSON configs and CSV/JSON run artifacts, bit-exact on
//!   round trip.
//! - [`cli`] — the `pulsesync` binary: `run`, `compare`, and `sweep`.
//!
//! # Example
//!
//! ```
//! use pulsesync::actuation::ActuationMethod;
//! use pulsesync::coupling::{CouplingConfig, CouplingMode};
//! use pulsesync::engine::{run, ExperimentConfig, InitCondition};
//!
//! let config = ExperimentConfig {
//!     n_agents: 6,
//!     coupling: CouplingConfig { mode: CouplingMode::Sync, gain: 0.5 },
//!     method: ActuationMethod::default_optimized_spin(),
//!     network: Default::default(),
//!     init: InitCondition::EquallySpaced,
//!     dt: 0.05,
//!     t_end: 120.0,
//!     seed: 42,
//!     heading_noise_std: 0.0,
//!     analysis: Default::default(),
//! };
//! let (trace, summary) = run(&config)?;
//! assert!(summary.convergence_time.is_some());
//! assert!(trace.records.last().unwrap().metric.radians() < 0.05);
//! # Ok::<(), pulsesync::Error>(())
//! ```
//!
//! The `examples/` directory walks through every major capability:
//! worst-case sync and desync, the three actuation methods, gain sweeps,
//! agent dropout, packet loss, heading noise, the method-comparison
//! harness, and artifact round-tripping.

pub mod actuation;
pub mod cli;
pub mod coupling;
pub mod engine;
pub mod error;
pub mod io;
pub mod metrics;
pub mod network;
pub mod phase;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Identifier of one agent in the network. Runs assign ids `1..=N`; ids
/// stay stable across failures and joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub u32);

impl std::fmt::Display for AgentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
