use std::fmt;

use serde::Serialize;

use super::{SsmlDocument, SsmlNode};
use crate::prosody::PipelineConfig;

/// Values within half a unit of the last printed decimal count as in range.
const TOLERANCE: f64 = 0.005 + 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Slash-separated element path, e.g. `segment[0]/prosody[2]`.
    pub path: String,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.path, self.rule, self.detail)
    }
}

/// Structural and range checks; an empty list means the document is valid.
pub fn validate(doc: &SsmlDocument, cfg: &PipelineConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, seg) in doc.segments.iter().enumerate() {
        walk(seg, &format!("segment[{i}]"), false, cfg, &mut out);
    }
    out
}

fn walk(nodes: &[SsmlNode], prefix: &str, in_prosody: bool, cfg: &PipelineConfig, out: &mut Vec<Violation>) {
    for (i, node) in nodes.iter().enumerate() {
        let path = format!("{prefix}/{}[{i}]", node.tag_name());
        let mut push = |rule: &'static str, detail: String| {
            out.push(Violation {
                path: path.clone(),
                rule,
                detail,
            })
        };
        match node {
            SsmlNode::Prosody {
                pitch_pct,
                rate_pct,
                volume_pct,
                children,
            } => {
                if in_prosody {
                    push("nested-prosody", "prosody inside prosody".into());
                }
                let checks = [
                    ("pitch-out-of-range", *pitch_pct, cfg.pitch_bounds_pct()),
                    ("rate-out-of-range", *rate_pct, cfg.rate_bounds_pct()),
                    ("volume-out-of-range", *volume_pct, cfg.volume_bounds_pct()),
                ];
                for (rule, value, (lo, hi)) in checks {
                    if let Some(v) = value {
                        if !(v >= lo - TOLERANCE && v <= hi + TOLERANCE) {
                            push(rule, format!("{v} outside [{lo:.2}, {hi:.2}]"));
                        }
                    }
                }
                walk(children, &path, true, cfg, out);
            }
            SsmlNode::Break { time_ms } => {
                if !(*time_ms >= 0.0) {
                    push("negative-break", format!("{time_ms} ms"));
                }
            }
            SsmlNode::Silence { value_ms, .. } => {
                if !(*value_ms >= 0.0) {
                    push("negative-silence", format!("{value_ms} ms"));
                }
            }
            SsmlNode::Text { content } => {
                if content.trim().is_empty() {
                    push("empty-text", "text node is blank".into());
                }
            }
            SsmlNode::Opaque { children, .. } => walk(children, &path, in_prosody, cfg, out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(nodes: Vec<SsmlNode>) -> SsmlDocument {
        SsmlDocument::fragment(nodes)
    }

    #[test]
    fn nested_prosody() {
        let inner = SsmlNode::prosody(0.0, 0.0, 0.0, vec![SsmlNode::text("b")]);
        let d = doc(vec![SsmlNode::prosody(0.0, 0.0, 0.0, vec![SsmlNode::text("a"), inner])]);
        let v = validate(&d, &PipelineConfig::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "nested-prosody");
        assert_eq!(v[0].path, "segment[0]/prosody[0]/prosody[1]");
    }

    #[test]
    fn nested_through_opaque() {
        let inner = SsmlNode::prosody(0.0, 0.0, 0.0, vec![SsmlNode::text("b")]);
        let wrapper = SsmlNode::Opaque {
            name: "s".into(),
            attrs: vec![],
            children: vec![inner],
        };
        let d = doc(vec![SsmlNode::prosody(0.0, 0.0, 0.0, vec![wrapper])]);
        assert_eq!(validate(&d, &PipelineConfig::default())[0].rule, "nested-prosody");
    }

    #[test]
    fn out_of_range_volume() {
        let d = doc(vec![SsmlNode::prosody(0.0, 0.0, 40.0, vec![SsmlNode::text("a")])]);
        let v = validate(&d, &PipelineConfig::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "volume-out-of-range");
    }

    #[test]
    fn range_edges() {
        let cfg = PipelineConfig::default();
        let ok = doc(vec![SsmlNode::prosody(9.05, 5.0, -10.0, vec![SsmlNode::text("a")])]);
        assert!(validate(&ok, &cfg).is_empty());
        let bad = doc(vec![SsmlNode::prosody(9.06, 5.01, -10.01, vec![SsmlNode::text("a")])]);
        let rules: Vec<_> = validate(&bad, &cfg).iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec!["pitch-out-of-range", "rate-out-of-range", "volume-out-of-range"]);
    }

    #[test]
    fn break_and_text_rules() {
        let d = doc(vec![SsmlNode::Break { time_ms: -1.0 }, SsmlNode::text("  ")]);
        let rules: Vec<_> = validate(&d, &PipelineConfig::default()).iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec!["negative-break", "empty-text"]);
    }
}
