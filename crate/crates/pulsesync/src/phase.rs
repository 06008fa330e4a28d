//! Circular arithmetic on headings and the two state-error metrics.
//!
//! A [`Phase`] is a point on the unit circle in `[0, 2π)`. A [`PhaseDelta`]
//! is a signed shortest-path rotation in `(−π, π]` — the "turn value" an
//! agent is commanded to execute. [`containing_arc`] measures distance from
//! synchrony (all agents at one heading), [`splay_error`] measures distance
//! from the splay state (agents evenly spaced `2π/N` apart).

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Comparison tolerance for angles in this module, in radians.
///
/// Far below any physical heading resolution, far above accumulated
/// double-precision noise in the operations here.
pub const ANGLE_TOL: f64 = 1e-9;

/// A heading on the unit circle, always in `[0, 2π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    /// Reduce any finite angle modulo 2π into `[0, 2π)`.
    pub fn wrap(radians: f64) -> Result<Phase> {
        if !radians.is_finite() {
            return Err(Error::InvalidInput(format!(
                "phase must be finite, got {radians}"
            )));
        }
        Ok(Phase(reduce(radians)))
    }

    /// The heading in radians, guaranteed in `[0, 2π)`.
    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// This heading rotated by `delta` radians, re-wrapped into `[0, 2π)`.
    ///
    /// `delta` must be finite; it always is when it comes from a
    /// [`PhaseDelta`] or an executed turn.
    #[inline]
    pub fn rotated(self, delta: f64) -> Phase {
        debug_assert!(delta.is_finite());
        Phase(reduce(self.0 + delta))
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let radians = f64::deserialize(deserializer)?;
        Phase::wrap(radians).map_err(serde::de::Error::custom)
    }
}

/// `rem_euclid` can land exactly on 2π for tiny negative inputs; fold that
/// edge back to keep the `[0, 2π)` invariant airtight.
#[inline]
fn reduce(radians: f64) -> f64 {
    let mut v = radians.rem_euclid(TAU);
    if v >= TAU {
        v -= TAU;
    }
    v
}

/// A signed shortest-path rotation in `(−π, π]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct PhaseDelta(f64);

impl PhaseDelta {
    pub const ZERO: PhaseDelta = PhaseDelta(0.0);

    /// Validate an arbitrary value as a turn command.
    pub fn new(radians: f64) -> Result<PhaseDelta> {
        if !radians.is_finite() || radians <= -PI || radians > PI {
            return Err(Error::InvalidInput(format!(
                "phase delta must lie in (-pi, pi], got {radians}"
            )));
        }
        Ok(PhaseDelta(radians))
    }

    /// Internal constructor for values already known to be in range.
    #[inline]
    pub(crate) fn from_raw(radians: f64) -> PhaseDelta {
        debug_assert!(radians.is_finite() && radians > -PI && radians <= PI);
        PhaseDelta(radians)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Scale by a factor in `[0, 1]`; stays in `(−π, π]`.
    #[inline]
    pub(crate) fn scaled(self, factor: f64) -> PhaseDelta {
        debug_assert!((0.0..=1.0).contains(&factor));
        PhaseDelta(self.0 * factor)
    }

    /// −1, 0 or +1.
    #[inline]
    pub fn signum(self) -> i8 {
        if self.0 > 0.0 {
            1
        } else if self.0 < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Signed shortest-path angular displacement from `from` to `to`.
///
/// When the two arcs are equal (separation exactly π) the tie breaks toward
/// positive rotation, so the result is always in `(−π, π]` and
/// `circ_dist(a, b) == -circ_dist(b, a)` holds exactly away from the tie.
pub fn circ_dist(from: Phase, to: Phase) -> PhaseDelta {
    // raw is in (−2π, 2π); one conditional fold lands it in (−π, π].
    let raw = to.radians() - from.radians();
    let folded = if raw > PI {
        raw - TAU
    } else if raw <= -PI {
        raw + TAU
    } else {
        raw
    };
    PhaseDelta::from_raw(folded)
}

/// Nonnegative state-error metric in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct ArcMetric(f64);

impl ArcMetric {
    /// Wrap an already-computed metric value (engine bookkeeping; the
    /// public mints are [`containing_arc`] and [`splay_error`]).
    #[inline]
    pub(crate) fn from_radians(radians: f64) -> ArcMetric {
        debug_assert!(radians >= 0.0);
        ArcMetric(radians)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Length of the smallest circular arc containing every phase.
///
/// Computed as 2π minus the largest gap between circularly adjacent sorted
/// phases. Zero exactly when all phases coincide.
pub fn containing_arc(phases: &[Phase]) -> Result<ArcMetric> {
    let gaps = circular_gaps(phases)?;
    let largest = gaps.iter().cloned().fold(0.0_f64, f64::max);
    Ok(ArcMetric(TAU - largest))
}

/// Total absolute deviation of the circular gaps from the splay spacing 2π/N.
///
/// Zero exactly when the phases form a perfect splay; bounded above by
/// `4π(N−1)/N`, attained when all phases coincide.
pub fn splay_error(phases: &[Phase]) -> Result<ArcMetric> {
    let gaps = circular_gaps(phases)?;
    let target = TAU / gaps.len() as f64;
    Ok(ArcMetric(gaps.iter().map(|g| (g - target).abs()).sum()))
}

/// The N circular gaps between adjacent sorted phases; they sum to 2π.
fn circular_gaps(phases: &[Phase]) -> Result<Vec<f64>> {
    if phases.is_empty() {
        return Err(Error::InvalidInput(
            "metric requires at least one phase".into(),
        ));
    }
    let mut sorted: Vec<f64> = phases.iter().map(|p| p.radians()).collect();
    sorted.sort_unstable_by(f64::total_cmp);

    let mut gaps = Vec::with_capacity(sorted.len());
    for pair in sorted.windows(2) {
        gaps.push(pair[1] - pair[0]);
    }
    // Wrap-around gap; for a single phase this is the full circle.
    gaps.push(TAU - (sorted[sorted.len() - 1] - sorted[0]));
    Ok(gaps)
}
