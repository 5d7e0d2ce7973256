//! The three per-syntagm delta formulas.

use super::{semitones_to_pct, PipelineConfig, ProsodyError};

/// Percent pitch change of `f0` relative to `f0_baseline`, clipped in the
/// semitone domain to `[-0.7 P, P]`.
pub fn pitch_delta(f0: f64, f0_baseline: f64, cfg: &PipelineConfig) -> Result<f64, ProsodyError> {
    if !(f0 > 0.0 && f0_baseline > 0.0) || !f0.is_finite() || !f0_baseline.is_finite() {
        return Err(ProsodyError::Domain(format!(
            "pitch needs positive frequencies, got f0={f0} baseline={f0_baseline}"
        )));
    }
    let (lo, hi) = cfg.pitch_bounds_st();
    let st = (12.0 * (f0 / f0_baseline).log2()).clamp(lo, hi);
    Ok(semitones_to_pct(st))
}

/// Gain in percent for the loudness difference `baseline - synthetic` (LU),
/// clipped to `±V`.
pub fn volume_delta(
    baseline_lufs: f64,
    synthetic_lufs: f64,
    cfg: &PipelineConfig,
) -> Result<f64, ProsodyError> {
    if !baseline_lufs.is_finite() || !synthetic_lufs.is_finite() {
        return Err(ProsodyError::Domain(format!(
            "volume needs finite loudness, got baseline={baseline_lufs} synthetic={synthetic_lufs}"
        )));
    }
    let delta_lu = baseline_lufs - synthetic_lufs;
    let (lo, hi) = cfg.volume_bounds_pct();
    Ok(((10f64.powf(delta_lu / 20.0) - 1.0) * 100.0).clamp(lo, hi))
}

/// Relative change of the natural speaking rate over the synthetic one.
///
/// Slow-downs of syntagms longer than `long_syntagm_s` are scaled by
/// `slowdown_gain`, speed-ups by `speedup_gain`; the result is clamped to
/// `[-R, 0.5 R]`.
pub fn rate_delta(
    words: usize,
    natural_s: f64,
    synthetic_s: f64,
    cfg: &PipelineConfig,
) -> Result<f64, ProsodyError> {
    if words == 0 {
        return Err(ProsodyError::Domain("rate needs at least one word".into()));
    }
    if !(natural_s > 0.0 && synthetic_s > 0.0) {
        return Err(ProsodyError::Domain(format!(
            "rate needs positive durations, got natural={natural_s} synthetic={synthetic_s}"
        )));
    }
    let n = words as f64;
    let natural_rate = n / natural_s;
    let synthetic_rate = n / synthetic_s;
    let mut r = (natural_rate - synthetic_rate) / synthetic_rate * 100.0;
    if r < 0.0 && natural_s > cfg.long_syntagm_s {
        r *= cfg.slowdown_gain;
    } else if r > 0.0 {
        r *= cfg.speedup_gain;
    }
    let (lo, hi) = cfg.rate_bounds_pct();
    Ok(r.clamp(lo, hi))
}
