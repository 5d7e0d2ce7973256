use super::{AudioBuffer, SegmentBounds};

/// RMS gate parameters for silence-based segmentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SilenceConfig {
    pub threshold_dbfs: f64,
    pub min_gap_ms: u64,
    pub window_ms: u64,
    pub hop_ms: u64,
}

impl Default for SilenceConfig {
    fn default() -> Self {
        SilenceConfig {
            threshold_dbfs: -35.0,
            min_gap_ms: 300,
            window_ms: 25,
            hop_ms: 10,
        }
    }
}

/// Maximal runs of audio whose windowed RMS exceeds the threshold.
///
/// Each active window contributes its full sample span. Runs separated by less
/// than `min_gap_ms` are merged.
pub fn detect_speech_segments(buf: &AudioBuffer, cfg: &SilenceConfig) -> Vec<SegmentBounds> {
    let rate = buf.sample_rate() as u64;
    let window = ((cfg.window_ms * rate) / 1000).max(1) as usize;
    let hop = ((cfg.hop_ms * rate) / 1000).max(1) as usize;
    let threshold = 10f64.powf(cfg.threshold_dbfs / 20.0);
    let threshold_sq = threshold * threshold;
    let samples = buf.samples();

    // Active sample spans, already merged where they touch or overlap.
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut start = 0usize;
    while start < samples.len() {
        let end = (start + window).min(samples.len());
        let frame = &samples[start..end];
        let mean_sq =
            frame.iter().map(|&s| (s as f64) * (s as f64)).sum::<f64>() / frame.len() as f64;
        if mean_sq > threshold_sq {
            match spans.last_mut() {
                Some(last) if start <= last.1 => last.1 = last.1.max(end),
                _ => spans.push((start, end)),
            }
        }
        if end == samples.len() {
            break;
        }
        start += hop;
    }

    let mut segments: Vec<SegmentBounds> = Vec::new();
    for (s, e) in spans {
        let start_ms = buf.sample_to_ms(s);
        let end_ms = buf.sample_to_ms(e);
        if end_ms <= start_ms {
            continue;
        }
        match segments.last_mut() {
            Some(last) if start_ms.saturating_sub(last.end_ms) < cfg.min_gap_ms => {
                last.end_ms = end_ms;
            }
            _ => segments.push(SegmentBounds::new(start_ms, end_ms)),
        }
    }
    segments
}
