//! Audio ingestion and the acoustic feature extractors.

mod loudness;
mod pitch;
mod resample;
mod segment;
mod wav;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use loudness::{integrated_loudness, Loudness, LoudnessMeter, BLOCK_MS};
pub use pitch::{estimate_f0_track, median_f0, F0Frame, F0Track, PitchConfig};
pub use resample::{resample, resample_to_16k, TARGET_RATE};
pub use segment::{detect_speech_segments, SilenceConfig};
pub use wav::load_wav;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed WAV data in {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("unsupported WAV encoding in {path}: {message}")]
    UnsupportedCodec { path: String, message: String },
    #[error("unsupported sample rate {0} Hz (minimum 8000 Hz)")]
    UnsupportedRate(u32),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("segment of {actual_ms} ms is shorter than one {required_ms} ms gating block")]
    TooShort { actual_ms: u64, required_ms: u64 },
    #[error("speaking rate needs a positive duration, got {0} s")]
    NonPositiveDuration(f64),
}

/// Mono signal with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl AudioBuffer {
    /// Panics if `sample_rate` is zero.
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Self {
        assert!(sample_rate > 0, "sample rate must be positive");
        AudioBuffer {
            samples,
            sample_rate,
        }
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f32> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_ms(&self) -> u64 {
        self.sample_to_ms(self.samples.len())
    }

    pub fn peak(&self) -> f32 {
        self.samples.iter().fold(0.0f32, |m, s| m.max(s.abs()))
    }

    /// Sample index to milliseconds, rounded to nearest.
    pub fn sample_to_ms(&self, index: usize) -> u64 {
        ((index as f64) * 1000.0 / self.sample_rate as f64).round() as u64
    }

    /// Milliseconds to the nearest sample index, clamped to the buffer length.
    pub fn ms_to_sample(&self, ms: f64) -> usize {
        let idx = (ms.max(0.0) * self.sample_rate as f64 / 1000.0).round() as usize;
        idx.min(self.samples.len())
    }

    /// Samples covered by `bounds`, clamped to the buffer.
    pub fn slice(&self, bounds: SegmentBounds) -> &[f32] {
        let start = self.ms_to_sample(bounds.start_ms as f64);
        let end = self.ms_to_sample(bounds.end_ms as f64).max(start);
        &self.samples[start..end]
    }
}

/// Divides every sample by the peak magnitude so the loudest sample reaches
/// full scale. Silent buffers come back unchanged.
///
/// Division rather than multiplication by the reciprocal keeps the peak sample
/// at exactly 1.0, which makes the operation idempotent sample-for-sample.
pub fn peak_normalize(buf: &AudioBuffer) -> AudioBuffer {
    let peak = buf.peak();
    if peak == 0.0 || peak == 1.0 {
        return buf.clone();
    }
    let samples = buf.samples.iter().map(|s| s / peak).collect();
    AudioBuffer::new(samples, buf.sample_rate)
}

/// Words per second over speech time with pauses already removed.
pub fn speaking_rate(word_count: usize, net_duration_s: f64) -> Result<f64, DspError> {
    if !(net_duration_s > 0.0) {
        return Err(DspError::NonPositiveDuration(net_duration_s));
    }
    Ok(word_count as f64 / net_duration_s)
}

/// Half-open time interval in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SegmentBounds {
    pub start_ms: u64,
    pub end_ms: u64,
}

impl SegmentBounds {
    pub fn new(start_ms: u64, end_ms: u64) -> Self {
        debug_assert!(end_ms > start_ms);
        SegmentBounds { start_ms, end_ms }
    }

    pub fn duration_ms(&self) -> u64 {
        self.end_ms - self.start_ms
    }
}
