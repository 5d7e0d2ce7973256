//! Frame-wise f0 estimation with the YIN difference function.
//!
//! Each frame computes the squared-difference function over lags up to the
//! period of `fmin`, normalises it by its cumulative mean, takes the first dip
//! under the voicing threshold (descending to the local minimum), and refines
//! the lag with a parabola through the neighbouring values.

use serde::{Deserialize, Serialize};

use super::{AudioBuffer, DspError, SegmentBounds};
use crate::stats::median;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchConfig {
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub fmin: f64,
    pub fmax: f64,
    /// Cumulative-mean-normalised difference below which a frame is voiced.
    pub threshold: f64,
}

impl Default for PitchConfig {
    fn default() -> Self {
        PitchConfig {
            frame_ms: 40.0,
            hop_ms: 10.0,
            fmin: 60.0,
            fmax: 400.0,
            threshold: 0.15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F0Frame {
    /// Frame centre.
    pub time_ms: f64,
    pub f0_hz: Option<f64>,
}

impl F0Frame {
    pub fn voiced(&self) -> bool {
        self.f0_hz.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct F0Track {
    pub frames: Vec<F0Frame>,
}

impl F0Track {
    pub fn voiced_fraction(&self) -> f64 {
        if self.frames.is_empty() {
            return 0.0;
        }
        self.frames.iter().filter(|f| f.voiced()).count() as f64 / self.frames.len() as f64
    }
}

pub fn estimate_f0_track(buf: &AudioBuffer, cfg: &PitchConfig) -> Result<F0Track, DspError> {
    if !(cfg.fmin > 0.0 && cfg.fmax > cfg.fmin) {
        return Err(DspError::Config(format!(
            "need 0 < fmin < fmax, got fmin={} fmax={}",
            cfg.fmin, cfg.fmax
        )));
    }
    if !(cfg.hop_ms > 0.0) {
        return Err(DspError::Config("hop must be positive".into()));
    }
    let min_frame_ms = 2000.0 / cfg.fmin;
    if cfg.frame_ms < min_frame_ms {
        return Err(DspError::Config(format!(
            "frame of {} ms is shorter than two periods of fmin ({min_frame_ms:.1} ms)",
            cfg.frame_ms
        )));
    }

    let rate = buf.sample_rate() as f64;
    let frame = (cfg.frame_ms * rate / 1000.0).round() as usize;
    let hop = ((cfg.hop_ms * rate / 1000.0).round() as usize).max(1);
    let min_lag = ((rate / cfg.fmax).floor() as usize).max(2);
    let max_lag = (rate / cfg.fmin).ceil() as usize;
    // The parabola at max_lag needs one extra lag; the integration window is
    // what remains of the frame.
    let window = frame.saturating_sub(max_lag + 1);
    if window < max_lag {
        return Err(DspError::Config(format!(
            "frame of {frame} samples leaves too short an integration window"
        )));
    }

    let samples = buf.samples();
    let mut diff = vec![0.0f64; max_lag + 2];
    let mut frames = Vec::new();
    let mut start = 0usize;
    while start + frame <= samples.len() {
        let chunk = &samples[start..start + frame];
        let f0 = yin_frame(chunk, window, min_lag, max_lag, cfg.threshold, &mut diff)
            .map(|lag| rate / lag)
            .and_then(|f| {
                // Interpolation can overshoot the band edge by a fraction of a lag.
                let slack = 0.02 * f;
                (f >= cfg.fmin - slack && f <= cfg.fmax + slack)
                    .then(|| f.clamp(cfg.fmin, cfg.fmax))
            });
        frames.push(F0Frame {
            time_ms: (start as f64 + frame as f64 / 2.0) * 1000.0 / rate,
            f0_hz: f0,
        });
        start += hop;
    }
    Ok(F0Track { frames })
}

/// Returns the refined period in samples, or `None` when unvoiced.
fn yin_frame(
    chunk: &[f32],
    window: usize,
    min_lag: usize,
    max_lag: usize,
    threshold: f64,
    diff: &mut [f64],
) -> Option<f64> {
    let head = &chunk[..window];
    diff[0] = 0.0;
    for (lag, d) in diff.iter_mut().enumerate().skip(1) {
        let shifted = &chunk[lag..lag + window];
        *d = head
            .iter()
            .zip(shifted)
            .map(|(&a, &b)| {
                let e = a - b;
                e * e
            })
            .sum::<f32>() as f64;
    }

    // Cumulative mean normalisation, in place.
    let mut running = 0.0;
    let mut any_energy = false;
    diff[0] = 1.0;
    for lag in 1..diff.len() {
        running += diff[lag];
        if running > 0.0 {
            diff[lag] *= lag as f64 / running;
            any_energy = true;
        } else {
            diff[lag] = 1.0;
        }
    }
    if !any_energy {
        return None;
    }

    let mut lag = min_lag;
    while lag <= max_lag {
        if diff[lag] < threshold {
            while lag < max_lag && diff[lag + 1] < diff[lag] {
                lag += 1;
            }
            return Some(parabolic(diff, lag));
        }
        lag += 1;
    }
    None
}

fn parabolic(d: &[f64], lag: usize) -> f64 {
    let (a, b, c) = (d[lag - 1], d[lag], d[lag + 1]);
    let denom = a - 2.0 * b + c;
    if denom.abs() < f64::EPSILON {
        return lag as f64;
    }
    let shift = 0.5 * (a - c) / denom;
    lag as f64 + shift.clamp(-1.0, 1.0)
}

/// Median f0 over the voiced frames whose centre falls inside `bounds`.
pub fn median_f0(track: &F0Track, bounds: SegmentBounds) -> Option<f64> {
    let (start, end) = (bounds.start_ms as f64, bounds.end_ms as f64);
    let voiced: Vec<f64> = track
        .frames
        .iter()
        .filter(|f| f.time_ms >= start && f.time_ms < end)
        .filter_map(|f| f.f0_hz)
        .collect();
    median(&voiced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(freq: f64, seconds: f64) -> AudioBuffer {
        let n = (seconds * 16000.0) as usize;
        AudioBuffer::new(
            (0..n)
                .map(|i| (0.8 * (2.0 * PI * freq * i as f64 / 16000.0).sin()) as f32)
                .collect(),
            16000,
        )
    }

    fn whole(track: &F0Track) -> SegmentBounds {
        SegmentBounds::new(0, track.frames.last().unwrap().time_ms as u64 + 1)
    }

    #[test]
    fn pure_sine_220() {
        let track = estimate_f0_track(&sine(220.0, 1.0), &PitchConfig::default()).unwrap();
        let good = track
            .frames
            .iter()
            .filter(|f| f.f0_hz.is_some_and(|f0| (f0 - 220.0).abs() <= 2.0))
            .count();
        assert!(good as f64 >= 0.9 * track.frames.len() as f64);
    }

    #[test]
    fn sines_across_the_band() {
        for freq in [80.0, 120.0, 200.0, 300.0, 400.0] {
            let track = estimate_f0_track(&sine(freq, 1.0), &PitchConfig::default()).unwrap();
            let m = median_f0(&track, whole(&track)).unwrap();
            assert!((m - freq).abs() / freq < 0.01, "{freq} Hz gave {m}");
        }
    }

    #[test]
    fn white_noise_is_mostly_unvoiced() {
        // xorshift noise, uniform in [-1, 1)
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let samples = (0..16000)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                ((state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0) as f32
            })
            .collect();
        let track =
            estimate_f0_track(&AudioBuffer::new(samples, 16000), &PitchConfig::default()).unwrap();
        assert!(track.voiced_fraction() <= 0.2, "{}", track.voiced_fraction());
    }

    #[test]
    fn silence_is_unvoiced() {
        let track = estimate_f0_track(
            &AudioBuffer::new(vec![0.0; 16000], 16000),
            &PitchConfig::default(),
        )
        .unwrap();
        assert!(!track.frames.is_empty());
        assert!(track.frames.iter().all(|f| !f.voiced()));
    }

    #[test]
    fn one_frame_per_hop() {
        let track = estimate_f0_track(&sine(200.0, 1.0), &PitchConfig::default()).unwrap();
        assert_eq!(track.frames.len(), (16000 - 640) / 160 + 1);
        assert!(track.frames.windows(2).all(|w| w[0].time_ms < w[1].time_ms));
    }

    #[test]
    fn short_frame_is_a_config_error() {
        let cfg = PitchConfig {
            frame_ms: 30.0,
            ..PitchConfig::default()
        };
        assert!(matches!(
            estimate_f0_track(&sine(200.0, 0.5), &cfg),
            Err(DspError::Config(_))
        ));
    }

    fn frames(values: &[Option<f64>]) -> F0Track {
        F0Track {
            frames: values
                .iter()
                .enumerate()
                .map(|(i, &f0_hz)| F0Frame {
                    time_ms: i as f64 * 10.0,
                    f0_hz,
                })
                .collect(),
        }
    }

    #[test]
    fn median_of_voiced_frames() {
        let track = frames(&[Some(200.0), None, Some(220.0), Some(210.0)]);
        assert_eq!(median_f0(&track, SegmentBounds::new(0, 100)), Some(210.0));
        let unvoiced = frames(&[None, None]);
        assert_eq!(median_f0(&unvoiced, SegmentBounds::new(0, 100)), None);
        let split: Vec<_> = std::iter::repeat_n(Some(100.0), 10)
            .chain(std::iter::repeat_n(Some(300.0), 10))
            .collect();
        assert_eq!(median_f0(&frames(&split), SegmentBounds::new(0, 1000)), Some(200.0));
    }

    #[test]
    fn median_respects_bounds() {
        let track = frames(&[Some(100.0), Some(100.0), Some(300.0), Some(300.0)]);
        assert_eq!(median_f0(&track, SegmentBounds::new(20, 40)), Some(300.0));
    }

    proptest::proptest! {
        #[test]
        fn median_ignores_frame_order(
            mut values in proptest::collection::vec(proptest::option::of(60.0f64..400.0), 1..40),
            seed in 0u64..1000,
        ) {
            let bounds = SegmentBounds::new(0, 10_000);
            let a = median_f0(&frames(&values), bounds);
            // deterministic shuffle
            let n = values.len();
            let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                values.swap(i, (s >> 33) as usize % (i + 1));
            }
            proptest::prop_assert_eq!(a, median_f0(&frames(&values), bounds));
        }
    }
}
