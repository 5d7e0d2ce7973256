//! Integrated loudness per ITU-R BS.1770-4 for a mono channel.
//!
//! The signal is K-weighted (high shelf followed by a high-pass), split into
//! 400 ms gating blocks with 75% overlap, and gated at -70 LUFS absolute and
//! -10 LU relative.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{AudioBuffer, DspError, SegmentBounds};

pub const BLOCK_MS: u64 = 400;
const STEP_MS: u64 = 100;
const ABSOLUTE_GATE_LUFS: f64 = -70.0;
const RELATIVE_GATE_LU: f64 = -10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loudness {
    Lufs(f64),
    /// Every gating block fell below the absolute gate.
    Silence,
}

impl Loudness {
    pub fn lufs(self) -> Option<f64> {
        match self {
            Loudness::Lufs(v) => Some(v),
            Loudness::Silence => None,
        }
    }
}

/// Second-order IIR section with `a0 = 1`.
#[derive(Debug, Clone, Copy)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

impl Biquad {
    /// Stage 1, modelling the acoustic effect of the head.
    fn high_shelf(rate: f64) -> Self {
        let gain_db = 3.999_843_853_97;
        let q = 0.707_175_236_955_419_3;
        let fc = 1_681.974_450_955_531_9;
        let k = (PI * fc / rate).tan();
        let vh = 10f64.powf(gain_db / 20.0);
        let vb = vh.powf(0.499_666_774_155);
        let a0 = 1.0 + k / q + k * k;
        Biquad {
            b: [
                (vh + vb * k / q + k * k) / a0,
                2.0 * (k * k - vh) / a0,
                (vh - vb * k / q + k * k) / a0,
            ],
            a: [2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0],
        }
    }

    /// Stage 2, the revised low-frequency B-curve.
    fn high_pass(rate: f64) -> Self {
        let q = 0.500_327_037_325_395_3;
        let fc = 38.135_470_876_139_82;
        let k = (PI * fc / rate).tan();
        let a0 = 1.0 + k / q + k * k;
        Biquad {
            b: [1.0, -2.0, 1.0],
            a: [2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0],
        }
    }

    fn run(self, input: impl Iterator<Item = f64>) -> impl Iterator<Item = f64> {
        let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
        input.map(move |x0| {
            let y0 = self.b[0] * x0 + self.b[1] * x1 + self.b[2] * x2 - self.a[0] * y1
                - self.a[1] * y2;
            x2 = x1;
            x1 = x0;
            y2 = y1;
            y1 = y0;
            y0
        })
    }
}

/// K-weighted energy of a whole buffer, ready for repeated segment queries.
///
/// Filtering the full signal once keeps filter start-up transients out of
/// per-segment measurements.
pub struct LoudnessMeter {
    rate: u32,
    /// `prefix[i]` is the sum of squared K-weighted samples before index `i`.
    prefix: Vec<f64>,
}

impl LoudnessMeter {
    pub fn new(buf: &AudioBuffer) -> Self {
        let rate = buf.sample_rate() as f64;
        let shelf = Biquad::high_shelf(rate);
        let hp = Biquad::high_pass(rate);
        let mut prefix = Vec::with_capacity(buf.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for y in hp.run(shelf.run(buf.samples().iter().map(|&s| s as f64))) {
            acc += y * y;
            prefix.push(acc);
        }
        LoudnessMeter {
            rate: buf.sample_rate(),
            prefix,
        }
    }

    fn samples_for(&self, ms: u64) -> usize {
        ((ms as f64) * self.rate as f64 / 1000.0).round() as usize
    }

    pub fn integrated(&self, bounds: SegmentBounds) -> Result<Loudness, DspError> {
        let total = self.prefix.len() - 1;
        let start = self.samples_for(bounds.start_ms).min(total);
        let end = self.samples_for(bounds.end_ms).min(total).max(start);
        let block = self.samples_for(BLOCK_MS);
        let step = self.samples_for(STEP_MS);
        if end - start < block {
            return Err(DspError::TooShort {
                actual_ms: ((end - start) as f64 * 1000.0 / self.rate as f64).round() as u64,
                required_ms: BLOCK_MS,
            });
        }

        let mut powers = Vec::new();
        let mut s = start;
        while s + block <= end {
            powers.push((self.prefix[s + block] - self.prefix[s]) / block as f64);
            s += step;
        }

        let above_absolute: Vec<f64> = powers
            .into_iter()
            .filter(|&z| block_lufs(z) > ABSOLUTE_GATE_LUFS)
            .collect();
        if above_absolute.is_empty() {
            return Ok(Loudness::Silence);
        }
        let relative_gate = block_lufs(mean(&above_absolute)) + RELATIVE_GATE_LU;
        let gated: Vec<f64> = above_absolute
            .into_iter()
            .filter(|&z| block_lufs(z) > relative_gate)
            .collect();
        Ok(Loudness::Lufs(block_lufs(mean(&gated))))
    }
}

fn block_lufs(power: f64) -> f64 {
    if power <= 0.0 {
        f64::NEG_INFINITY
    } else {
        -0.691 + 10.0 * power.log10()
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Gated integrated loudness of the samples inside `bounds`.
pub fn integrated_loudness(buf: &AudioBuffer, bounds: SegmentBounds) -> Result<Loudness, DspError> {
    LoudnessMeter::new(buf).integrated(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, rate: u32, seconds: f64, amp: f64) -> AudioBuffer {
        let n = (seconds * rate as f64) as usize;
        AudioBuffer::new(
            (0..n)
                .map(|i| (amp * (2.0 * PI * freq * i as f64 / rate as f64).sin()) as f32)
                .collect(),
            rate,
        )
    }

    /// |H(e^jw)| of a biquad evaluated on the unit circle, independent of the
    /// time-domain filter loop and the gating path.
    fn response_db(f: Biquad, freq: f64, rate: f64) -> f64 {
        let w = 2.0 * PI * freq / rate;
        let z1 = (w.cos(), -w.sin());
        let z2 = ((2.0 * w).cos(), -(2.0 * w).sin());
        let num = (
            f.b[0] + f.b[1] * z1.0 + f.b[2] * z2.0,
            f.b[1] * z1.1 + f.b[2] * z2.1,
        );
        let den = (1.0 + f.a[0] * z1.0 + f.a[1] * z2.0, f.a[0] * z1.1 + f.a[1] * z2.1);
        20.0 * (num.0.hypot(num.1) / den.0.hypot(den.1)).log10()
    }

    fn whole(buf: &AudioBuffer) -> SegmentBounds {
        SegmentBounds::new(0, buf.duration_ms())
    }

    #[test]
    fn silence_is_sentinel() {
        let buf = AudioBuffer::new(vec![0.0; 16000], 16000);
        assert_eq!(integrated_loudness(&buf, whole(&buf)).unwrap(), Loudness::Silence);
    }

    #[test]
    fn reference_sine_at_48k() {
        // BS.1770 calibrates the offset so that a full-scale 997 Hz sine
        // reads -3.01 LKFS at 48 kHz.
        let buf = sine(997.0, 48000, 5.0, 1.0);
        let l = integrated_loudness(&buf, whole(&buf)).unwrap().lufs().unwrap();
        assert!((l - -3.01).abs() < 0.01, "{l}");
    }

    #[test]
    fn reference_sine_matches_analog_prototype() {
        // Mean square 0.5 plus the K-weighting gain at 997 Hz.
        for rate in [48000u32, 16000, 44100] {
            let r = rate as f64;
            let gain = response_db(Biquad::high_shelf(r), 997.0, r)
                + response_db(Biquad::high_pass(r), 997.0, r);
            let expected = -0.691 + 10.0 * 0.5f64.log10() + gain;
            let tol = 0.01;
            let buf = sine(997.0, rate, 5.0, 1.0);
            let l = integrated_loudness(&buf, whole(&buf)).unwrap().lufs().unwrap();
            assert!((l - expected).abs() < tol, "{rate}: {l} vs {expected}");
        }
    }

    #[test]
    fn minus_twenty_dbfs_is_twenty_lu_lower() {
        let loud = sine(997.0, 16000, 5.0, 1.0);
        let quiet = sine(997.0, 16000, 5.0, 0.1);
        let a = integrated_loudness(&loud, whole(&loud)).unwrap().lufs().unwrap();
        let b = integrated_loudness(&quiet, whole(&quiet)).unwrap().lufs().unwrap();
        assert!((a - 20.0 - b).abs() < 0.05, "{a} {b}");
    }

    #[test]
    fn short_segment_is_rejected() {
        let buf = sine(997.0, 16000, 1.0, 0.5);
        let err = integrated_loudness(&buf, SegmentBounds::new(0, 399)).unwrap_err();
        assert!(matches!(err, DspError::TooShort { required_ms: 400, .. }));
    }

    #[test]
    fn relative_gate_drops_quiet_tail() {
        // 3 s tone followed by 3 s at -40 dB: the quiet blocks fall under the
        // relative gate. Only the blocks straddling the edge pull the result
        // down; an ungated mean would sit 3 dB lower.
        let mut samples = sine(997.0, 16000, 3.0, 0.5).into_samples();
        samples.extend(sine(997.0, 16000, 3.0, 0.005).into_samples());
        let mixed = AudioBuffer::new(samples, 16000);
        let tone = sine(997.0, 16000, 3.0, 0.5);
        let a = integrated_loudness(&mixed, whole(&mixed)).unwrap().lufs().unwrap();
        let b = integrated_loudness(&tone, whole(&tone)).unwrap().lufs().unwrap();
        assert!((a - b).abs() < 0.3, "{a} {b}");
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn gain_linearity(gain in 0.1f64..1.0, freq in 200.0f64..4000.0) {
            let base = sine(freq, 16000, 2.0, 0.9);
            let scaled = AudioBuffer::new(
                base.samples().iter().map(|&s| (s as f64 * gain) as f32).collect(),
                16000,
            );
            let a = integrated_loudness(&base, whole(&base)).unwrap().lufs().unwrap();
            let b = integrated_loudness(&scaled, whole(&scaled)).unwrap().lufs().unwrap();
            proptest::prop_assert!((b - a - 20.0 * gain.log10()).abs() < 0.05);
        }
    }
}
