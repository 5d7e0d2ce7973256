//! Band-limited sample-rate conversion with a Blackman-windowed sinc kernel.
//!
//! The conversion ratio is reduced to `up / down` and the kernel is tabulated
//! for each of the `up` fractional phases, so every output sample is a 64-tap
//! dot product against the input.

use std::f64::consts::PI;

use super::{AudioBuffer, DspError};

pub const TARGET_RATE: u32 = 16_000;

const TAPS: usize = 64;
const HALF: i64 = (TAPS / 2) as i64;
/// Passband edge as a fraction of the lower Nyquist frequency.
const CUTOFF: f64 = 0.9;
/// Above this many phases the kernel is evaluated per output sample.
const MAX_TABLE_PHASES: u64 = 4096;
const MIN_RATE: u32 = 8_000;

pub fn resample_to_16k(buf: &AudioBuffer) -> Result<AudioBuffer, DspError> {
    resample(buf, TARGET_RATE)
}

pub fn resample(buf: &AudioBuffer, target_rate: u32) -> Result<AudioBuffer, DspError> {
    let source_rate = buf.sample_rate();
    if source_rate < MIN_RATE {
        return Err(DspError::UnsupportedRate(source_rate));
    }
    if target_rate == 0 {
        return Err(DspError::Config("target rate must be positive".into()));
    }
    if source_rate == target_rate {
        return Ok(buf.clone());
    }

    let g = gcd(source_rate as u64, target_rate as u64);
    let up = target_rate as u64 / g;
    let down = source_rate as u64 / g;
    // Cutoff in cycles per input sample.
    let fc = 0.5 * CUTOFF * (target_rate.min(source_rate) as f64) / source_rate as f64;

    let input = buf.samples();
    let out_len = ((input.len() as u128 * up as u128 + (down / 2) as u128) / down as u128) as usize;
    let table = (up <= MAX_TABLE_PHASES).then(|| {
        (0..up)
            .map(|p| kernel(fc, p as f64 / up as f64))
            .collect::<Vec<_>>()
    });

    let mut out = Vec::with_capacity(out_len);
    for n in 0..out_len as u64 {
        let pos = n * down;
        let base = (pos / up) as i64;
        let phase = pos % up;
        let owned;
        let taps: &[f64; TAPS] = match &table {
            Some(t) => &t[phase as usize],
            None => {
                owned = kernel(fc, phase as f64 / up as f64);
                &owned
            }
        };
        let mut acc = 0.0f64;
        let first = base - HALF + 1;
        for (k, &h) in taps.iter().enumerate() {
            let idx = first + k as i64;
            if idx >= 0 && (idx as usize) < input.len() {
                acc += h * input[idx as usize] as f64;
            }
        }
        out.push(acc as f32);
    }
    Ok(AudioBuffer::new(out, target_rate))
}

/// Taps for input offsets `-31..=32` relative to the sample at or before the
/// output instant, which sits `frac` samples after it. Normalised to unit DC gain.
fn kernel(fc: f64, frac: f64) -> [f64; TAPS] {
    let mut taps = [0.0; TAPS];
    for (k, tap) in taps.iter_mut().enumerate() {
        let u = (k as i64 - HALF + 1) as f64 - frac;
        let x = 2.0 * fc * u;
        let sinc = if x.abs() < 1e-12 {
            1.0
        } else {
            (PI * x).sin() / (PI * x)
        };
        let r = u / HALF as f64;
        let window = if r.abs() >= 1.0 {
            0.0
        } else {
            0.42 + 0.5 * (PI * r).cos() + 0.08 * (2.0 * PI * r).cos()
        };
        *tap = sinc * window;
    }
    let sum: f64 = taps.iter().sum();
    for tap in &mut taps {
        *tap /= sum;
    }
    taps
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, rate: u32, seconds: f64, amp: f64) -> AudioBuffer {
        let n = (seconds * rate as f64).round() as usize;
        let samples = (0..n)
            .map(|i| (amp * (2.0 * PI * freq * i as f64 / rate as f64).sin()) as f32)
            .collect();
        AudioBuffer::new(samples, rate)
    }

    #[test]
    fn identity_at_target_rate() {
        let buf = sine(440.0, 16000, 0.1, 0.5);
        assert_eq!(resample_to_16k(&buf).unwrap(), buf);
    }

    #[test]
    fn sine_48k_matches_analytic_sine() {
        let out = resample_to_16k(&sine(1000.0, 48000, 1.0, 0.9)).unwrap();
        assert_eq!(out.sample_rate(), 16000);
        let trim = 160;
        let worst = out.samples()[trim..out.len() - trim]
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let t = (i + trim) as f64 / 16000.0;
                (s as f64 - 0.9 * (2.0 * PI * 1000.0 * t).sin()).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "max error {worst}");
    }

    #[test]
    fn sine_44k1_matches_analytic_sine() {
        let out = resample_to_16k(&sine(1000.0, 44100, 0.5, 0.9)).unwrap();
        let trim = 160;
        for (i, &s) in out.samples()[trim..out.len() - trim].iter().enumerate() {
            let t = (i + trim) as f64 / 16000.0;
            let want = 0.9 * (2.0 * PI * 1000.0 * t).sin();
            assert!((s as f64 - want).abs() < 1e-3, "sample {i}");
        }
    }

    #[test]
    fn duration_is_preserved() {
        let out = resample_to_16k(&AudioBuffer::new(vec![0.0; 88200], 44100)).unwrap();
        assert!(out.len().abs_diff(32000) <= 1);
        let up = resample_to_16k(&AudioBuffer::new(vec![0.0; 8000], 8000)).unwrap();
        assert_eq!(up.len(), 16000);
    }

    #[test]
    fn upsampled_sine_matches() {
        let out = resample_to_16k(&sine(440.0, 8000, 0.5, 0.5)).unwrap();
        let trim = 160;
        for (i, &s) in out.samples()[trim..out.len() - trim].iter().enumerate() {
            let t = (i + trim) as f64 / 16000.0;
            let want = 0.5 * (2.0 * PI * 440.0 * t).sin();
            assert!((s as f64 - want).abs() < 1e-3, "sample {i}");
        }
    }

    #[test]
    fn low_rate_is_rejected() {
        let buf = AudioBuffer::new(vec![0.0; 100], 4000);
        assert!(matches!(
            resample_to_16k(&buf),
            Err(DspError::UnsupportedRate(4000))
        ));
    }

    #[test]
    fn awkward_ratio_uses_direct_kernel() {
        // 44101 / 16000 has no common factor, so the phase table is skipped.
        let out = resample_to_16k(&sine(500.0, 44101, 0.2, 0.5)).unwrap();
        let trim = 160;
        for (i, &s) in out.samples()[trim..out.len() - trim].iter().enumerate() {
            let t = (i + trim) as f64 / 16000.0;
            let want = 0.5 * (2.0 * PI * 500.0 * t).sin();
            assert!((s as f64 - want).abs() < 1e-3);
        }
    }
}
