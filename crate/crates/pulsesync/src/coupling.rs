//! Phase-response rules: what an agent does with a heading it just heard.
//!
//! Two modes share one gain knob. [`sync_response`] chases the broadcaster a
//! fraction of the way along the shortest arc; [`desync_response`] steers
//! toward the midpoint of the agent's circular neighbors, whose only fixed
//! point (for N ≥ 2) is the evenly spaced splay state. Desync decisions are
//! made from a [`PhaseTable`] of last-heard values, not global state — each
//! agent knows exactly what it has heard over the radio, nothing more.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{circ_dist, Phase, PhaseDelta};
use crate::AgentId;

/// Which collective state the network is steering toward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// All agents at one heading (containing arc → 0).
    Sync,
    /// Agents evenly spaced 2π/N apart (splay error → 0).
    Desync,
}

/// Response rule plus the coefficient applied to each commanded turn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub mode: CouplingMode,
    /// Fraction of the computed correction actually commanded, in (0, 1].
    pub gain: f64,
}

impl CouplingConfig {
    pub fn validate(&self) -> Result<()> {
        check_gain(self.gain)
    }
}

fn check_gain(gain: f64) -> Result<()> {
    if !gain.is_finite() || gain <= 0.0 || gain > 1.0 {
        return Err(Error::invalid_config(
            "gain",
            format!("must lie in (0, 1], got {gain}"),
        ));
    }
    Ok(())
}

/// One remembered heading: what was heard and when.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableEntry {
    pub phase: Phase,
    /// Simulation time at which this value was heard (or set, for own).
    pub heard_at: f64,
}

/// An agent's last-heard view of the network, keyed by agent id.
///
/// Holds at most one entry per id. The owning agent's entry is created at
/// construction and refreshed by the engine before every read, so it always
/// reflects the current own phase.
#[derive(Clone, Debug)]
pub struct PhaseTable {
    own_id: AgentId,
    entries: BTreeMap<AgentId, TableEntry>,
}

impl PhaseTable {
    /// Fresh table holding only the owner's entry.
    pub fn new(own_id: AgentId, own_phase: Phase) -> PhaseTable {
        let mut entries = BTreeMap::new();
        entries.insert(
            own_id,
            TableEntry {
                phase: own_phase,
                heard_at: 0.0,
            },
        );
        PhaseTable { own_id, entries }
    }

    pub fn own_id(&self) -> AgentId {
        self.own_id
    }

    /// Insert or refresh the entry for `id`.
    pub fn record(&mut self, id: AgentId, phase: Phase, t: f64) {
        self.entries.insert(id, TableEntry { phase, heard_at: t });
    }

    /// Refresh the owner's entry with its current phase.
    pub fn set_own(&mut self, phase: Phase, t: f64) {
        self.record(self.own_id, phase, t);
    }

    /// Drop the entry for `id` (used when that agent fails). No-op if absent.
    pub fn forget(&mut self, id: AgentId) {
        self.entries.remove(&id);
    }

    pub fn get(&self, id: AgentId) -> Option<TableEntry> {
        self.entries.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending id order.
    pub fn entries(&self) -> impl Iterator<Item = (AgentId, TableEntry)> + '_ {
        self.entries.iter().map(|(&id, &e)| (id, e))
    }
}

/// Synchronization response: move a fraction `gain` of the way along the
/// shortest arc toward the heading just heard.
///
/// Zero exactly when `own == heard`; magnitude never exceeds `gain · π`.
pub fn sync_response(own: Phase, heard: Phase, gain: f64) -> Result<PhaseDelta> {
    check_gain(gain)?;
    Ok(circ_dist(own, heard).scaled(gain))
}

/// Desynchronization response: steer toward the midpoint of the circular
/// neighbors recorded in `table`.
///
/// With one known agent there is nothing to avoid (response 0). With two,
/// the target is the point opposite the other agent. Otherwise the target
/// is the predecessor's phase advanced by half the forward gap from
/// predecessor to successor; at a perfect splay that is the agent's own
/// phase, so the response vanishes. Sorting ties (equal phases) break by
/// ascending agent id, which keeps the rule deterministic.
pub fn desync_response(own_id: AgentId, table: &PhaseTable, gain: f64) -> Result<PhaseDelta> {
    check_gain(gain)?;
    let own = table
        .get(own_id)
        .ok_or_else(|| Error::InvalidInput(format!("agent {own_id} has no entry in its table")))?
        .phase;

    let mut ring: Vec<(Phase, AgentId)> = table.entries().map(|(id, e)| (e.phase, id)).collect();
    match ring.len() {
        1 => return Ok(PhaseDelta::ZERO),
        2 => {
            let (other, _) = ring
                .iter()
                .find(|&&(_, id)| id != own_id)
                .copied()
                .expect("two entries, one is not own");
            let target = other.rotated(PI);
            return Ok(circ_dist(own, target).scaled(gain));
        }
        _ => {}
    }

    ring.sort_unstable_by(|a, b| a.0.radians().total_cmp(&b.0.radians()).then(a.1.cmp(&b.1)));
    let pos = ring
        .iter()
        .position(|&(_, id)| id == own_id)
        .expect("own entry present by lookup above");
    let n = ring.len();
    let pred = ring[(pos + n - 1) % n].0;
    let succ = ring[(pos + 1) % n].0;

    // Forward (counterclockwise) gap from predecessor to successor — the
    // slot this agent should center itself in.
    let gap = (succ.radians() - pred.radians()).rem_euclid(std::f64::consts::TAU);
    let target = pred.rotated(gap / 2.0);
    Ok(circ_dist(own, target).scaled(gain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{containing_arc, splay_error, ANGLE_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn p(radians: f64) -> Phase {
        Phase::wrap(radians).unwrap()
    }

    /// Table over the given phases with ids 1..=N; returns it as seen by
    /// the agent with the requested id.
    fn table_of(phases: &[f64], own: u32) -> PhaseTable {
        let mut t = PhaseTable::new(AgentId(own), p(phases[(own - 1) as usize]));
        for (i, &ph) in phases.iter().enumerate() {
            t.record(AgentId(i as u32 + 1), p(ph), 0.0);
        }
        t
    }

    #[test]
    fn gain_validation() {
        assert!(sync_response(p(0.0), p(1.0), 0.0).is_err());
        assert!(sync_response(p(0.0), p(1.0), 1.2).is_err());
        assert!(sync_response(p(0.0), p(1.0), f64::NAN).is_err());
        let cfg = CouplingConfig {
            mode: CouplingMode::Sync,
            gain: -0.5,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sync_response_known_values() {
        // Already synchronized: nothing to do.
        assert_eq!(
            sync_response(p(1.3), p(1.3), 0.7).unwrap(),
            PhaseDelta::ZERO
        );

        // Full gain snaps onto the broadcaster.
        let snap = sync_response(p(PI / 2.0), p(0.0), 1.0).unwrap();
        assert!((snap.radians() + PI / 2.0).abs() < ANGLE_TOL);

        // Shortest path to 3π/2 is −π/2; half gain commands −π/4.
        let half = sync_response(p(0.0), p(3.0 * PI / 2.0), 0.5).unwrap();
        assert!((half.radians() + PI / 4.0).abs() < ANGLE_TOL);
        assert_eq!(
            half.radians(),
            circ_dist(p(0.0), p(3.0 * PI / 2.0)).radians() * 0.5,
            "must agree with the distance oracle exactly"
        );
    }

    #[test]
    fn desync_response_known_values() {
        // Three-agent splay: every response is zero.
        let splay = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
        for own in 1..=3 {
            let r = desync_response(AgentId(own), &table_of(&splay, own), 1.0).unwrap();
            assert!(r.radians().abs() < ANGLE_TOL, "agent {own} moved at splay");
        }

        // {0, π/2, π}, own at π/2: already centered between its neighbors.
        let centered = table_of(&[0.0, PI / 2.0, PI], 2);
        let r = desync_response(AgentId(2), &centered, 1.0).unwrap();
        assert!(r.radians().abs() < ANGLE_TOL);

        // Two agents at the same phase: target is the antipode, and the
        // equal-arcs tie resolves to +π.
        let stacked = table_of(&[0.0, 0.0], 2);
        let r = desync_response(AgentId(2), &stacked, 1.0).unwrap();
        assert_eq!(r.radians(), PI);

        // Alone in the table: nothing to avoid.
        let solo = PhaseTable::new(AgentId(1), p(2.0));
        assert_eq!(
            desync_response(AgentId(1), &solo, 1.0).unwrap(),
            PhaseDelta::ZERO
        );
    }

    #[test]
    fn desync_response_requires_own_entry() {
        let t = PhaseTable::new(AgentId(1), p(0.0));
        assert!(desync_response(AgentId(2), &t, 1.0).is_err());
    }

    #[test]
    fn table_holds_one_entry_per_id() {
        let mut t = PhaseTable::new(AgentId(1), p(0.0));
        t.record(AgentId(2), p(1.0), 0.5);
        t.record(AgentId(2), p(2.0), 1.0);
        assert_eq!(t.len(), 2);
        let e = t.get(AgentId(2)).unwrap();
        assert_eq!(e.phase, p(2.0));
        assert_eq!(e.heard_at, 1.0);

        t.forget(AgentId(2));
        assert_eq!(t.len(), 1);
        assert!(t.get(AgentId(2)).is_none());
    }

    #[test]
    fn responses_bounded_by_gain_times_pi() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let gain: f64 = rng.random_range(0.01..=1.0);
            let own = p(rng.random_range(0.0..TAU));
            let heard = p(rng.random_range(0.0..TAU));
            let s = sync_response(own, heard, gain).unwrap();
            assert!(s.radians().abs() <= gain * PI + ANGLE_TOL);

            let n = rng.random_range(1..=8);
            let phases: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
            let own_id = rng.random_range(1..=n as u32);
            let d = desync_response(AgentId(own_id), &table_of(&phases, own_id), gain).unwrap();
            assert!(d.radians().abs() <= gain * PI + ANGLE_TOL);
        }
    }

    #[test]
    fn gain_linearity_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            let gain: f64 = rng.random_range(0.01..=0.5);
            let own = p(rng.random_range(0.0..TAU));
            let heard = p(rng.random_range(0.0..TAU));
            let single = sync_response(own, heard, gain).unwrap().radians();
            let double = sync_response(own, heard, 2.0 * gain).unwrap().radians();
            assert_eq!(
                double,
                2.0 * single,
                "doubling the gain must double the delta"
            );
        }
    }

    #[test]
    fn desync_fixed_point_at_random_splays() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let n = rng.random_range(2..=8);
            let shift: f64 = rng.random_range(0.0..TAU);
            let phases: Vec<f64> = (0..n).map(|i| shift + TAU * i as f64 / n as f64).collect();
            let own = rng.random_range(1..=n as u32);
            let r = desync_response(AgentId(own), &table_of(&phases, own), 1.0).unwrap();
            assert!(
                r.radians().abs() < ANGLE_TOL,
                "splay must be a fixed point: N={n} shift={shift} agent={own} -> {r:?}"
            );
        }
    }

    #[test]
    fn responses_rotation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..1000 {
            let c: f64 = rng.random_range(0.0..TAU);
            let gain: f64 = rng.random_range(0.01..=1.0);

            let own = rng.random_range(0.0..TAU);
            let heard = rng.random_range(0.0..TAU);
            let base = sync_response(p(own), p(heard), gain).unwrap().radians();
            let moved = sync_response(p(own + c), p(heard + c), gain)
                .unwrap()
                .radians();
            assert!((base - moved).abs() < ANGLE_TOL, "sync not equivariant");

            let n = rng.random_range(3..=8);
            let phases: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
            let rotated: Vec<f64> = phases.iter().map(|&ph| ph + c).collect();
            let own_id = rng.random_range(1..=n as u32);
            let base = desync_response(AgentId(own_id), &table_of(&phases, own_id), gain)
                .unwrap()
                .radians();
            let moved = desync_response(AgentId(own_id), &table_of(&rotated, own_id), gain)
                .unwrap()
                .radians();
            // Rotation can flip which side of a sorting tie an entry lands
            // on only if two phases were equal; random draws never tie.
            assert!((base - moved).abs() < ANGLE_TOL, "desync not equivariant");
        }
    }

    #[test]
    fn sync_broadcast_never_widens_a_half_circle_cluster() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for trial in 0..1000 {
            let n = rng.random_range(2..=8);
            let center: f64 = rng.random_range(0.0..TAU);
            let radius: f64 = rng.random_range(0.0..(PI / 2.0 - 1e-3));
            let phases: Vec<Phase> = (0..n)
                .map(|_| p(center + rng.random_range(-radius..=radius)))
                .collect();
            let gain: f64 = rng.random_range(0.01..=1.0);
            let broadcaster = rng.random_range(0..n);

            let before = containing_arc(&phases).unwrap().radians();
            let heard = phases[broadcaster];
            let after_phases: Vec<Phase> = phases
                .iter()
                .enumerate()
                .map(|(i, &ph)| {
                    if i == broadcaster {
                        ph
                    } else {
                        ph.rotated(sync_response(ph, heard, gain).unwrap().radians())
                    }
                })
                .collect();
            let after = containing_arc(&after_phases).unwrap().radians();
            assert!(
                after <= before + ANGLE_TOL,
                "trial {trial}: arc grew from {before} to {after}"
            );
        }
    }

    #[test]
    fn two_agent_desync_reaches_antiphase_in_one_full_gain_step() {
        // Starting identical, one response of gain 1 lands exactly on the
        // two-agent splay (antiphase), where the splay error is zero.
        let stacked = table_of(&[1.0, 1.0], 2);
        let r = desync_response(AgentId(2), &stacked, 1.0).unwrap();
        let moved = p(1.0).rotated(r.radians());
        let err = splay_error(&[p(1.0), moved]).unwrap().radians();
        assert!(err < ANGLE_TOL);
    }
}
