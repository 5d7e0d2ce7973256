use std::fmt::Write;

use quick_xml::escape::escape;

use super::{
    validate, SilencePosition, SsmlDocument, SsmlError, SsmlNode, DEFAULT_LANG, DEFAULT_VOICE,
    MSTTS_NS, SSML_NS,
};
use crate::prosody::{PipelineConfig, ProsodyDelta};

#[derive(Debug, Clone, PartialEq)]
pub struct EmitOptions {
    /// Bracket every prosody element with zero-length `mstts:silence` directives.
    pub azure_silence_wrap: bool,
    /// Leave out prosody elements whose three values are zero and zero breaks.
    pub suppress_neutral: bool,
    pub full_document: bool,
    pub lang: String,
    pub voice: String,
    /// Bounds enforced before emitting.
    pub bounds: PipelineConfig,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            azure_silence_wrap: false,
            suppress_neutral: false,
            full_document: false,
            lang: DEFAULT_LANG.to_string(),
            voice: DEFAULT_VOICE.to_string(),
            bounds: PipelineConfig::default(),
        }
    }
}

fn quantize(v: f64) -> f64 {
    let q = (v * 100.0).round() / 100.0;
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

/// Signed two-decimal percent, `+0.00%` for zero.
pub fn format_percent(v: f64) -> String {
    format!("{:+.2}%", quantize(v))
}

impl SsmlDocument {
    /// One prosody element and break per syntagm, as a single segment.
    pub fn from_syntagms(units: &[(String, ProsodyDelta)], opts: &EmitOptions) -> Self {
        let mut nodes = Vec::new();
        for (text, d) in units {
            let (p, r, v) = (quantize(d.pitch_pct), quantize(d.rate_pct), quantize(d.volume_pct));
            let text = SsmlNode::text(text.split_whitespace().collect::<Vec<_>>().join(" "));
            if opts.suppress_neutral && p == 0.0 && r == 0.0 && v == 0.0 {
                nodes.push(text);
            } else {
                if opts.azure_silence_wrap {
                    nodes.push(SsmlNode::Silence {
                        position: SilencePosition::LeadingExact,
                        value_ms: 0.0,
                    });
                }
                nodes.push(SsmlNode::prosody(p, r, v, vec![text]));
                if opts.azure_silence_wrap {
                    nodes.push(SsmlNode::Silence {
                        position: SilencePosition::TrailingExact,
                        value_ms: 0.0,
                    });
                }
            }
            let b = d.break_ms.round();
            if !(opts.suppress_neutral && b == 0.0) {
                nodes.push(SsmlNode::Break { time_ms: b });
            }
        }
        SsmlDocument {
            segments: vec![nodes],
            lang: opts.lang.clone(),
            voice: opts.voice.clone(),
            envelope: opts.full_document,
        }
    }
}

/// Emits the markup for a syntagm list, refusing deltas outside the bounds.
pub fn emit_syntagms(units: &[(String, ProsodyDelta)], opts: &EmitOptions) -> Result<String, SsmlError> {
    let doc = SsmlDocument::from_syntagms(units, opts);
    let violations = validate(&doc, &opts.bounds);
    if !violations.is_empty() {
        return Err(SsmlError::Invalid(violations));
    }
    Ok(emit_document(&doc))
}

/// Canonical serialization. The same document always yields the same bytes.
pub fn emit_document(doc: &SsmlDocument) -> String {
    let mut out = String::new();
    if doc.envelope {
        writeln!(
            out,
            "<speak version=\"1.0\" xmlns=\"{SSML_NS}\" xmlns:mstts=\"{MSTTS_NS}\" xml:lang=\"{}\">",
            escape(doc.lang.as_str())
        )
        .unwrap();
    }
    let bare = !doc.envelope && doc.segments.len() == 1;
    for seg in &doc.segments {
        if bare {
            write_nodes(&mut out, seg);
        } else {
            write!(out, "<voice name=\"{}\">", escape(doc.voice.as_str())).unwrap();
            write_nodes(&mut out, seg);
            out.push_str("</voice>\n");
        }
    }
    if doc.envelope {
        out.push_str("</speak>\n");
    }
    out
}

/// A break or trailing silence belongs to the unit before it, and whatever
/// follows a leading silence belongs to that silence's unit. Other nodes open a
/// new space-separated unit.
fn opens_unit(prev: &SsmlNode, node: &SsmlNode) -> bool {
    let attached = matches!(
        node,
        SsmlNode::Break { .. }
            | SsmlNode::Silence {
                position: SilencePosition::TrailingExact,
                ..
            }
    );
    let after_leading = matches!(
        prev,
        SsmlNode::Silence {
            position: SilencePosition::LeadingExact,
            ..
        }
    );
    !attached && !after_leading
}

fn write_nodes(out: &mut String, nodes: &[SsmlNode]) {
    for (i, n) in nodes.iter().enumerate() {
        if i > 0 && opens_unit(&nodes[i - 1], n) {
            out.push(' ');
        }
        write_node(out, n);
    }
}

fn write_node(out: &mut String, node: &SsmlNode) {
    match node {
        SsmlNode::Text { content } => out.push_str(&escape(content.as_str())),
        SsmlNode::Break { time_ms } => {
            write!(out, "<break time=\"{}ms\"/>", time_ms.round() as i64).unwrap();
        }
        SsmlNode::Silence { position, value_ms } => {
            let value = if *value_ms == 0.0 {
                "0".to_string()
            } else {
                format!("{}ms", value_ms.round() as i64)
            };
            write!(
                out,
                "<mstts:silence type=\"{}\" value=\"{value}\"/>",
                position.as_str()
            )
            .unwrap();
        }
        SsmlNode::Prosody {
            pitch_pct,
            rate_pct,
            volume_pct,
            children,
        } => {
            out.push_str("<prosody");
            for (name, v) in [("pitch", pitch_pct), ("rate", rate_pct), ("volume", volume_pct)] {
                if let Some(v) = v {
                    write!(out, " {name}=\"{}\"", format_percent(*v)).unwrap();
                }
            }
            out.push('>');
            write_nodes(out, children);
            out.push_str("</prosody>");
        }
        SsmlNode::Opaque {
            name,
            attrs,
            children,
        } => {
            write!(out, "<{name}").unwrap();
            for (k, v) in attrs {
                write!(out, " {k}=\"{}\"", escape(v.as_str())).unwrap();
            }
            if children.is_empty() {
                out.push_str("/>");
            } else {
                out.push('>');
                write_nodes(out, children);
                write!(out, "</{name}>").unwrap();
            }
        }
    }
}
