use serde::{Deserialize, Serialize};

use crate::ssml::{SsmlDocument, SsmlNode};

/// Tag and size counts over a set of documents.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TagCensus {
    pub segments: usize,
    pub prosody_tags: usize,
    pub break_tags: usize,
    pub prosody_per_segment: f64,
    pub break_per_segment: f64,
    pub words: usize,
    /// Characters of the whitespace-collapsed text, spaces included.
    pub characters: usize,
}

fn count(nodes: &[SsmlNode], prosody: &mut usize, breaks: &mut usize) {
    for n in nodes {
        match n {
            SsmlNode::Prosody { .. } => *prosody += 1,
            SsmlNode::Break { .. } => *breaks += 1,
            SsmlNode::Opaque { name, .. } if name == "break" => *breaks += 1,
            _ => {}
        }
        count(n.children(), prosody, breaks);
    }
}

pub fn tag_census<'a>(docs: impl IntoIterator<Item = &'a SsmlDocument>) -> TagCensus {
    let mut c = TagCensus::default();
    for doc in docs {
        for (seg, text) in doc.segments.iter().zip(doc.segment_texts()) {
            c.segments += 1;
            count(seg, &mut c.prosody_tags, &mut c.break_tags);
            c.words += text.split_whitespace().count();
            c.characters += text.chars().count();
        }
    }
    if c.segments > 0 {
        c.prosody_per_segment = c.prosody_tags as f64 / c.segments as f64;
        c.break_per_segment = c.break_tags as f64 / c.segments as f64;
    }
    c
}
