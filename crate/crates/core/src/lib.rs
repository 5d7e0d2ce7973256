//! Prosody annotation toolkit.
//!
//! Turns aligned natural speech and a baseline synthetic rendering of the same
//! transcript into per-syntagm prosodic deltas (pitch, rate, volume, break) and
//! SSML markup, and scores predicted SSML against gold annotations.
//!
//! The crate is organised along the pipeline:
//!
//! * [`dsp`]: WAV ingestion, resampling, normalization, silence segmentation,
//!   f0 tracking and BS.1770 loudness.
//! * [`alignment`]: TextGrid parsing, word/pause streams and syntagm segmentation.
//! * [`prosody`]: baselines, delta formulas, smoothing and corpus annotation.
//! * [`ssml`]: document model, emitter, parser and validator.
//! * [`eval`]: metrics (F1, perplexity, WER, ARR, MAE/RMSE), tag census and
//!   distribution summaries.
//! * [`records`]: line-delimited record files shared by the stages.

pub mod alignment;
pub mod dsp;
pub mod eval;
pub mod prosody;
pub mod records;
pub mod ssml;
mod stats;

pub use alignment::{Syntagm, Token, TokenKind};
pub use dsp::{AudioBuffer, Loudness, SegmentBounds};
pub use prosody::{Annotation, PipelineConfig, ProsodyDelta, SyntagmFeatures};
pub use ssml::{SsmlDocument, SsmlNode};


