//! SSML document model, emitter, parser and validator.

mod emit;
mod parse;
mod validate;

use serde::Serialize;
use thiserror::Error;

pub use emit::{emit_document, emit_syntagms, format_percent, EmitOptions};
pub use parse::parse;
pub use validate::{validate, Violation};

pub const DEFAULT_LANG: &str = "fr-FR";
pub const DEFAULT_VOICE: &str = "fr-FR-HenriNeural";
pub const SSML_NS: &str = "http://www.w3.org/2001/10/synthesis";
pub const MSTTS_NS: &str = "https://www.w3.org/2001/mstts";

#[derive(Debug, Error, PartialEq)]
pub enum SsmlError {
    #[error("malformed XML at offset {offset}: {message}")]
    Xml { offset: usize, message: String },
    #[error("non-numeric {attr} at offset {offset}: {value:?}")]
    NonNumeric {
        attr: String,
        value: String,
        offset: usize,
    },
    #[error("missing unit on {attr} at offset {offset}: {value:?}")]
    MissingUnit {
        attr: String,
        value: String,
        offset: usize,
    },
    #[error("negative break at offset {offset}")]
    NegativeBreak { offset: usize },
    #[error("refusing to emit invalid markup: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

impl SsmlError {
    /// Character offset into the parsed input, where one applies.
    pub fn offset(&self) -> Option<usize> {
        match self {
            SsmlError::Xml { offset, .. }
            | SsmlError::NonNumeric { offset, .. }
            | SsmlError::MissingUnit { offset, .. }
            | SsmlError::NegativeBreak { offset } => Some(*offset),
            SsmlError::Invalid(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SilencePosition {
    LeadingExact,
    TrailingExact,
}

impl SilencePosition {
    pub fn as_str(self) -> &'static str {
        match self {
            SilencePosition::LeadingExact => "leading-exact",
            SilencePosition::TrailingExact => "trailing-exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SsmlNode {
    /// Absent attributes are `None`.
    Prosody {
        pitch_pct: Option<f64>,
        rate_pct: Option<f64>,
        volume_pct: Option<f64>,
        children: Vec<SsmlNode>,
    },
    Break {
        time_ms: f64,
    },
    Silence {
        position: SilencePosition,
        value_ms: f64,
    },
    Text {
        content: String,
    },
    /// Any other element, kept verbatim so foreign markup can still be scored.
    Opaque {
        name: String,
        attrs: Vec<(String, String)>,
        children: Vec<SsmlNode>,
    },
}

impl SsmlNode {
    pub fn text(content: impl Into<String>) -> Self {
        SsmlNode::Text {
            content: content.into(),
        }
    }

    pub fn prosody(pitch_pct: f64, rate_pct: f64, volume_pct: f64, children: Vec<SsmlNode>) -> Self {
        SsmlNode::Prosody {
            pitch_pct: Some(pitch_pct),
            rate_pct: Some(rate_pct),
            volume_pct: Some(volume_pct),
            children,
        }
    }

    pub fn children(&self) -> &[SsmlNode] {
        match self {
            SsmlNode::Prosody { children, .. } | SsmlNode::Opaque { children, .. } => children,
            _ => &[],
        }
    }

    pub fn tag_name(&self) -> &str {
        match self {
            SsmlNode::Prosody { .. } => "prosody",
            SsmlNode::Break { .. } => "break",
            SsmlNode::Silence { .. } => "mstts:silence",
            SsmlNode::Text { .. } => "text",
            SsmlNode::Opaque { name, .. } => name,
        }
    }

    /// Concatenated text content, whitespace-collapsed.
    pub fn plain_text(&self) -> String {
        let mut parts = Vec::new();
        collect_text(std::slice::from_ref(self), &mut parts);
        parts.join(" ")
    }
}

fn collect_text<'a>(nodes: &'a [SsmlNode], out: &mut Vec<&'a str>) {
    for n in nodes {
        match n {
            SsmlNode::Text { content } => out.extend(content.split_whitespace()),
            other => collect_text(other.children(), out),
        }
    }
}

/// A `<speak>` document: one node sequence per audio segment, each rendered as a
/// `<voice>` element. Without `envelope` the segments are emitted bare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsmlDocument {
    pub segments: Vec<Vec<SsmlNode>>,
    pub lang: String,
    pub voice: String,
    pub envelope: bool,
}

impl Default for SsmlDocument {
    fn default() -> Self {
        SsmlDocument {
            segments: Vec::new(),
            lang: DEFAULT_LANG.to_string(),
            voice: DEFAULT_VOICE.to_string(),
            envelope: true,
        }
    }
}

impl SsmlDocument {
    pub fn fragment(nodes: Vec<SsmlNode>) -> Self {
        SsmlDocument {
            segments: vec![nodes],
            envelope: false,
            ..Default::default()
        }
    }

    /// Text of each segment, whitespace-collapsed.
    pub fn segment_texts(&self) -> Vec<String> {
        self.segments
            .iter()
            .map(|seg| {
                let mut parts = Vec::new();
                collect_text(seg, &mut parts);
                parts.join(" ")
            })
            .collect()
    }
}
