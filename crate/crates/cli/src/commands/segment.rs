use std::fmt::Write;
use std::path::Path;

use prosodika::dsp::{detect_speech_segments, load_wav};
use prosodika::SegmentBounds;

use crate::{CliError, EffectiveConfig};

/// Speech runs of one recording under the configured silence gate.
pub fn cmd_segment(audio: &Path, cfg: &EffectiveConfig) -> Result<Vec<SegmentBounds>, CliError> {
    let buf = load_wav(audio)?;
    Ok(detect_speech_segments(&buf, &cfg.silence()))
}

/// `start_ms,end_ms` with a header row.
pub fn segments_csv(bounds: &[SegmentBounds]) -> String {
    let mut out = String::from("start_ms,end_ms\n");
    for b in bounds {
        writeln!(out, "{},{}", b.start_ms, b.end_ms).unwrap();
    }
    out
}
