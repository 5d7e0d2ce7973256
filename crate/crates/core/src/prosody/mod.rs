//! Per-syntagm prosodic deltas of natural speech against the baseline voice.

mod annotate;
mod baseline;
mod deltas;
mod features;
mod smoothing;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use annotate::{annotate_corpus, Annotation, DeltaFlags, SyntagmFeatures};
pub use baseline::rolling_baseline;
pub use deltas::{pitch_delta, rate_delta, volume_delta};
pub use features::{loudness_window, measure_syntagms};
pub use smoothing::smooth_series;

#[derive(Debug, Error, PartialEq)]
pub enum ProsodyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("every value in the series is missing")]
    AllAbsent,
    #[error("natural and synthetic syntagms differ at index {index}: {reason}")]
    Pairing { index: usize, reason: String },
}

/// Knobs of the delta computation. Field names double as configuration keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Pitch ceiling in semitones; the floor is `-0.7` times this.
    pub pitch_clip_st: f64,
    /// Volume clip, percent either way.
    pub volume_clip_pct: f64,
    /// Rate floor in percent; the ceiling is half of it.
    pub rate_clip_pct: f64,
    /// Exponential smoothing factor for pitch and rate.
    pub alpha: f64,
    /// Largest step between consecutive smoothed values, in percent.
    pub max_jump_pct: f64,
    /// Rolling-median window length, in syntagms.
    pub window_w: usize,
    pub slowdown_gain: f64,
    pub speedup_gain: f64,
    /// Slow-downs are amplified only for syntagms longer than this.
    pub long_syntagm_s: f64,
    /// Apply the jump clamp to the raw series before smoothing instead of after.
    pub clamp_before_smoothing: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            pitch_clip_st: 1.5,
            volume_clip_pct: 10.0,
            rate_clip_pct: 10.0,
            alpha: 0.2,
            max_jump_pct: 8.0,
            window_w: 10,
            slowdown_gain: 1.5,
            speedup_gain: 0.5,
            long_syntagm_s: 1.0,
            clamp_before_smoothing: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ProsodyError> {
        let positive = [
            ("pitch_clip_st", self.pitch_clip_st),
            ("volume_clip_pct", self.volume_clip_pct),
            ("rate_clip_pct", self.rate_clip_pct),
            ("max_jump_pct", self.max_jump_pct),
            ("slowdown_gain", self.slowdown_gain),
            ("speedup_gain", self.speedup_gain),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(ProsodyError::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ProsodyError::Config(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if self.window_w == 0 {
            return Err(ProsodyError::Config("window_w must be >= 1".into()));
        }
        if !(self.long_syntagm_s >= 0.0) {
            return Err(ProsodyError::Config("long_syntagm_s must be >= 0".into()));
        }
        Ok(())
    }

    /// Semitone clip range `[-0.7 P, P]`.
    pub fn pitch_bounds_st(&self) -> (f64, f64) {
        (-0.7 * self.pitch_clip_st, self.pitch_clip_st)
    }

    /// The semitone clip range expressed as percent pitch change.
    pub fn pitch_bounds_pct(&self) -> (f64, f64) {
        let (lo, hi) = self.pitch_bounds_st();
        (semitones_to_pct(lo), semitones_to_pct(hi))
    }

    pub fn volume_bounds_pct(&self) -> (f64, f64) {
        (-self.volume_clip_pct, self.volume_clip_pct)
    }

    pub fn rate_bounds_pct(&self) -> (f64, f64) {
        (-self.rate_clip_pct, 0.5 * self.rate_clip_pct)
    }
}

pub fn semitones_to_pct(st: f64) -> f64 {
    (2f64.powf(st / 12.0) - 1.0) * 100.0
}

pub fn pct_to_semitones(pct: f64) -> f64 {
    12.0 * (1.0 + pct / 100.0).log2()
}

/// The four SSML-bound quantities for one syntagm.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProsodyDelta {
    pub pitch_pct: f64,
    pub rate_pct: f64,
    pub volume_pct: f64,
    pub break_ms: f64,
}

impl ProsodyDelta {
    pub fn is_neutral(&self) -> bool {
        self.pitch_pct == 0.0 && self.rate_pct == 0.0 && self.volume_pct == 0.0
    }
}
