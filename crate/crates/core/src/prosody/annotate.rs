use serde::{Deserialize, Serialize};

use super::{
    pitch_delta, rate_delta, rolling_baseline, volume_delta, PipelineConfig, ProsodyDelta,
    ProsodyError,
};
use crate::alignment::{fold_word, PauseOrigin, Syntagm};

/// Measured acoustics of one syntagm on one track.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntagmFeatures {
    /// `None` when the syntagm is unvoiced.
    pub median_f0_hz: Option<f64>,
    /// `None` when the syntagm is gated as silence.
    pub loudness_lufs: Option<f64>,
    pub rate_wps: f64,
    pub word_count: usize,
    pub net_duration_s: f64,
}

impl SyntagmFeatures {
    pub fn new(
        median_f0_hz: Option<f64>,
        loudness_lufs: Option<f64>,
        word_count: usize,
        net_duration_s: f64,
    ) -> Self {
        let rate_wps = if net_duration_s > 0.0 {
            word_count as f64 / net_duration_s
        } else {
            0.0
        };
        SyntagmFeatures {
            median_f0_hz,
            loudness_lufs,
            rate_wps,
            word_count,
            net_duration_s,
        }
    }
}

/// Degenerate cases met while computing a syntagm's delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeltaFlags {
    /// Pitch forced to 0: no f0 on either track or no baseline.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub no_pitch: bool,
    /// Volume forced to 0: silence on either track or no baseline.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub no_volume: bool,
    /// Rate forced to 0: a non-positive duration.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub no_rate: bool,
    /// The break is the sentence-final minimum, not a measured pause.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pause_injected: bool,
}

impl DeltaFlags {
    pub fn any(&self) -> bool {
        self.no_pitch || self.no_volume || self.no_rate || self.pause_injected
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub text: String,
    pub start_ms: f64,
    pub end_ms: f64,
    #[serde(flatten)]
    pub delta: ProsodyDelta,
    #[serde(default)]
    pub flags: DeltaFlags,
}

/// Deltas of the natural track against the synthetic one, one per syntagm.
///
/// Pitch compares the natural median f0 with a rolling median of the
/// synthetic f0; volume compares a rolling median of natural loudness with
/// the synthetic loudness. Pitch and rate are smoothed, volume is not.
/// Syntagms with a missing feature get 0 for that quantity and a flag, and
/// are skipped by the smoother.
pub fn annotate_corpus(
    nat: &[(Syntagm, SyntagmFeatures)],
    syn: &[(Syntagm, SyntagmFeatures)],
    cfg: &PipelineConfig,
) -> Result<Vec<Annotation>, ProsodyError> {
    cfg.validate()?;
    check_pairing(nat, syn)?;
    let n = nat.len();
    if n == 0 {
        return Ok(Vec::new());
    }

    let syn_f0: Vec<Option<f64>> = syn.iter().map(|(_, f)| positive(f.median_f0_hz)).collect();
    let nat_lufs: Vec<Option<f64>> = nat.iter().map(|(_, f)| finite(f.loudness_lufs)).collect();
    let f0_base = baseline_or_absent(&syn_f0, cfg.window_w)?;
    let lufs_base = baseline_or_absent(&nat_lufs, cfg.window_w)?;

    let mut flags = vec![DeltaFlags::default(); n];
    let mut pitch = vec![None; n];
    let mut rate = vec![None; n];
    let mut volume = vec![0.0; n];

    for i in 0..n {
        let (nat_s, nat_f) = &nat[i];
        let (_, syn_f) = &syn[i];

        match (positive(nat_f.median_f0_hz), f0_base.as_ref().map(|b| b[i])) {
            (Some(f0), Some(base)) if syn_f0[i].is_some() => {
                pitch[i] = Some(pitch_delta(f0, base, cfg)?);
            }
            _ => flags[i].no_pitch = true,
        }

        match (lufs_base.as_ref().map(|b| b[i]), finite(syn_f.loudness_lufs)) {
            (Some(base), Some(l_syn)) if nat_lufs[i].is_some() => {
                volume[i] = volume_delta(base, l_syn, cfg)?;
            }
            _ => flags[i].no_volume = true,
        }

        if nat_f.net_duration_s > 0.0 && syn_f.net_duration_s > 0.0 {
            rate[i] = Some(rate_delta(
                nat_f.word_count.max(1),
                nat_f.net_duration_s,
                syn_f.net_duration_s,
                cfg,
            )?);
        } else {
            flags[i].no_rate = true;
        }

        flags[i].pause_injected = nat_s.pause_origin == PauseOrigin::Injected;
    }

    let pitch = smooth_present(&pitch, cfg);
    let rate = smooth_present(&rate, cfg);

    Ok(nat
        .iter()
        .enumerate()
        .map(|(i, (s, _))| Annotation {
            text: s.text.clone(),
            start_ms: s.start_ms,
            end_ms: s.end_ms,
            delta: ProsodyDelta {
                pitch_pct: pitch[i],
                rate_pct: rate[i],
                volume_pct: volume[i],
                break_ms: s.trailing_pause_ms.max(0.0),
            },
            flags: flags[i],
        })
        .collect())
}

fn check_pairing(
    nat: &[(Syntagm, SyntagmFeatures)],
    syn: &[(Syntagm, SyntagmFeatures)],
) -> Result<(), ProsodyError> {
    for (index, pair) in nat.iter().zip(syn).enumerate() {
        let (a, b) = (&pair.0 .0, &pair.1 .0);
        let fa: Vec<String> = a.words.iter().map(|w| fold_word(&w.text)).collect();
        let fb: Vec<String> = b.words.iter().map(|w| fold_word(&w.text)).collect();
        if fa != fb {
            return Err(ProsodyError::Pairing {
                index,
                reason: format!("natural {:?} vs synthetic {:?}", a.text, b.text),
            });
        }
    }
    if nat.len() != syn.len() {
        return Err(ProsodyError::Pairing {
            index: nat.len().min(syn.len()),
            reason: format!("{} natural syntagms vs {} synthetic", nat.len(), syn.len()),
        });
    }
    Ok(())
}

fn positive(v: Option<f64>) -> Option<f64> {
    v.filter(|x| x.is_finite() && *x > 0.0)
}

fn finite(v: Option<f64>) -> Option<f64> {
    v.filter(|x| x.is_finite())
}

fn baseline_or_absent(values: &[Option<f64>], w: usize) -> Result<Option<Vec<f64>>, ProsodyError> {
    match rolling_baseline(values, w) {
        Ok(b) => Ok(Some(b)),
        Err(ProsodyError::AllAbsent) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Smooths the present entries as one contiguous series; absent ones stay 0.
fn smooth_present(values: &[Option<f64>], cfg: &PipelineConfig) -> Vec<f64> {
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    let mut smoothed = super::smooth_series(&present, cfg).into_iter();
    values
        .iter()
        .map(|v| match v {
            Some(_) => smoothed.next().unwrap_or(0.0),
            None => 0.0,
        })
        .collect()
}
