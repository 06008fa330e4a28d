//! Turning a commanded phase change into a physical rotation.
//!
//! The three methods differ in what they hold fixed: [`OptimizedSpin`]
//! always turns at top speed (duration scales with the magnitude),
//! [`ConstantTime`] always turns for the same duration (speed scales with
//! the magnitude, capped), [`ConstantFrequency`] always turns at the same
//! rate (duration scales with the magnitude). The differences are invisible
//! to a single completed turn but matter under preemption, where a slow or
//! long-running method is interrupted mid-rotation by the next broadcast.
//!
//! [`OptimizedSpin`]: ActuationMethod::OptimizedSpin
//! [`ConstantTime`]: ActuationMethod::ConstantTime
//! [`ConstantFrequency`]: ActuationMethod::ConstantFrequency

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::PhaseDelta;

/// How an agent executes a commanded turn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ActuationMethod {
    /// Decide the magnitude first, then spin toward it at full speed.
    OptimizedSpin { max_speed: f64 },
    /// Every turn takes the same wall time; speed is chosen per-turn and
    /// capped at `max_speed` (capping truncates the executed delta).
    ConstantTime { turn_duration: f64, max_speed: f64 },
    /// Every turn runs at the same angular rate; big corrections simply
    /// take longer, which is what makes this method oscillate.
    ConstantFrequency { angular_speed: f64 },
}

impl ActuationMethod {
    /// Reference parameters used by examples and method comparisons.
    pub const DEFAULT_MAX_SPEED: f64 = FRAC_PI_2;
    pub const DEFAULT_TURN_DURATION: f64 = 1.0;
    pub const DEFAULT_ANGULAR_SPEED: f64 = FRAC_PI_6;

    pub fn default_optimized_spin() -> ActuationMethod {
        ActuationMethod::OptimizedSpin {
            max_speed: Self::DEFAULT_MAX_SPEED,
        }
    }

    pub fn default_constant_time() -> ActuationMethod {
        ActuationMethod::ConstantTime {
            turn_duration: Self::DEFAULT_TURN_DURATION,
            max_speed: Self::DEFAULT_MAX_SPEED,
        }
    }

    pub fn default_constant_frequency() -> ActuationMethod {
        ActuationMethod::ConstantFrequency {
            angular_speed: Self::DEFAULT_ANGULAR_SPEED,
        }
    }

    /// Short lowercase label for file names and report rows.
    pub fn label(&self) -> &'static str {
        match self {
            ActuationMethod::OptimizedSpin { .. } => "optimized_spin",
            ActuationMethod::ConstantTime { .. } => "constant_time",
            ActuationMethod::ConstantFrequency { .. } => "constant_frequency",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |field: &str, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid_config(
                    field,
                    format!("must be finite and > 0, got {value}"),
                ))
            }
        };
        match *self {
            ActuationMethod::OptimizedSpin { max_speed } => check("max_speed", max_speed),
            ActuationMethod::ConstantTime {
                turn_duration,
                max_speed,
            } => {
                check("turn_duration", turn_duration)?;
                check("max_speed", max_speed)
            }
            ActuationMethod::ConstantFrequency { angular_speed } => {
                check("angular_speed", angular_speed)
            }
        }
    }
}

/// An in-progress rotation: direction, rate, and time left to run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurnProfile {
    /// −1, 0 or +1.
    pub direction: i8,
    /// Angular rate in rad/s, ≥ 0.
    pub speed: f64,
    /// Seconds of rotation left.
    pub remaining: f64,
    /// The delta this profile will actually execute (post-clamp).
    pub planned_delta: PhaseDelta,
    /// True when a ConstantTime speed cap truncated the commanded delta.
    pub clamped: bool,
}

impl TurnProfile {
    /// The do-nothing profile.
    pub fn null() -> TurnProfile {
        TurnProfile {
            direction: 0,
            speed: 0.0,
            remaining: 0.0,
            planned_delta: PhaseDelta::ZERO,
            clamped: false,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.remaining <= 0.0
    }

    /// Run the profile for up to `dt` seconds; returns the signed radians
    /// actually executed. Clips at the remaining time, so a profile
    /// completes exactly and never overshoots its planned delta.
    pub fn advance(&mut self, dt: f64) -> f64 {
        debug_assert!(dt > 0.0);
        let step = dt.min(self.remaining);
        self.remaining -= step;
        f64::from(self.direction) * self.speed * step
    }
}

/// Build the rotation profile that executes `delta` under `method`.
///
/// A zero delta yields the null profile under every method, sidestepping
/// zero-duration divisions.
pub fn plan_turn(delta: PhaseDelta, method: ActuationMethod) -> Result<TurnProfile> {
    method.validate()?;
    let magnitude = delta.radians().abs();
    if magnitude == 0.0 {
        return Ok(TurnProfile::null());
    }
    let direction = delta.signum();

    let profile = match method {
        ActuationMethod::OptimizedSpin { max_speed } => TurnProfile {
            direction,
            speed: max_speed,
            remaining: magnitude / max_speed,
            planned_delta: delta,
            clamped: false,
        },
        ActuationMethod::ConstantTime {
            turn_duration,
            max_speed,
        } => {
            let speed = magnitude / turn_duration;
            if speed > max_speed {
                // Keep the defining equal-duration property; give up on the
                // unreachable tail of the commanded delta instead.
                TurnProfile {
                    direction,
                    speed: max_speed,
                    remaining: turn_duration,
                    planned_delta: PhaseDelta::from_raw(
                        f64::from(direction) * (max_speed * turn_duration),
                    ),
                    clamped: true,
                }
            } else {
                TurnProfile {
                    direction,
                    speed,
                    remaining: turn_duration,
                    planned_delta: delta,
                    clamped: false,
                }
            }
        }
        ActuationMethod::ConstantFrequency { angular_speed } => TurnProfile {
            direction,
            speed: angular_speed,
            remaining: magnitude / angular_speed,
            planned_delta: delta,
            clamped: false,
        },
    };
    debug_assert!(
        (f64::from(profile.direction) * profile.speed * profile.remaining
            - profile.planned_delta.radians())
        .abs()
            < 1e-9
    );
    Ok(profile)
}
