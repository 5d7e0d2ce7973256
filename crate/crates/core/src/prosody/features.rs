use super::SyntagmFeatures;
use crate::alignment::Syntagm;
use crate::dsp::{median_f0, F0Track, LoudnessMeter, SegmentBounds, BLOCK_MS};

/// Loudness window for a span: the span itself, or a gating block centred on it
/// (shifted to stay inside the audio) when the span is shorter than one block.
pub fn loudness_window(start_ms: f64, end_ms: f64, audio_ms: u64) -> Option<SegmentBounds> {
    let start = start_ms.max(0.0).round() as u64;
    let end = (end_ms.round() as u64).min(audio_ms).max(start);
    if end - start >= BLOCK_MS {
        return Some(SegmentBounds::new(start, end));
    }
    if audio_ms < BLOCK_MS {
        return None;
    }
    let centre = (start + end) / 2;
    let lo = centre.saturating_sub(BLOCK_MS / 2).min(audio_ms - BLOCK_MS);
    Some(SegmentBounds::new(lo, lo + BLOCK_MS))
}

/// Median f0 and loudness of each syntagm's span of one track.
pub fn measure_syntagms(
    syntagms: &[Syntagm],
    track: &F0Track,
    meter: &LoudnessMeter,
    audio_ms: u64,
) -> Vec<SyntagmFeatures> {
    syntagms
        .iter()
        .map(|s| {
            let span = SegmentBounds::new(s.start_ms.max(0.0).round() as u64, s.end_ms.max(0.0).round() as u64);
            let f0 = median_f0(track, span);
            let loudness = loudness_window(s.start_ms, s.end_ms, audio_ms)
                .and_then(|w| meter.integrated(w).ok())
                .and_then(|l| l.lufs());
            SyntagmFeatures::new(f0, loudness, s.word_count, s.net_duration_s)
        })
        .collect()
}
