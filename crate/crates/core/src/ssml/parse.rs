use quick_xml::escape::resolve_predefined_entity;
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use super::{SilencePosition, SsmlDocument, SsmlError, SsmlNode, DEFAULT_LANG, DEFAULT_VOICE};

struct Frame {
    name: String,
    attrs: Vec<(String, String)>,
    offset: usize,
    children: Vec<SsmlNode>,
    pending: String,
}

impl Frame {
    fn new(name: String, attrs: Vec<(String, String)>, offset: usize) -> Self {
        Frame {
            name,
            attrs,
            offset,
            children: Vec::new(),
            pending: String::new(),
        }
    }

    fn flush_text(&mut self) {
        let collapsed = self.pending.split_whitespace().collect::<Vec<_>>().join(" ");
        self.pending.clear();
        if !collapsed.is_empty() {
            self.children.push(SsmlNode::Text { content: collapsed });
        }
    }
}

/// Byte offsets from the reader become character offsets into `input`.
fn char_offset(input: &str, byte: u64) -> usize {
    let byte = (byte as usize).min(input.len());
    let mut b = byte;
    while !input.is_char_boundary(b) {
        b -= 1;
    }
    input[..b].chars().count()
}

/// Parses SSML. A `<speak>` envelope is optional; each `<voice>` becomes a
/// segment. Text is trimmed and whitespace-collapsed; unknown elements are kept
/// as opaque nodes.
pub fn parse(input: &str) -> Result<SsmlDocument, SsmlError> {
    let mut reader = Reader::from_str(input);
    let xml_err = |offset: u64, message: String| SsmlError::Xml {
        offset: char_offset(input, offset),
        message,
    };
    let mut stack = vec![Frame::new(String::new(), Vec::new(), 0)];

    loop {
        let pos = reader.buffer_position();
        let event = reader
            .read_event()
            .map_err(|e| xml_err(reader.error_position(), e.to_string()))?;
        let top = stack.last_mut().expect("root frame");
        match event {
            Event::Start(e) => {
                top.flush_text();
                let (name, attrs) = element_parts(&e).map_err(|m| xml_err(pos, m))?;
                stack.push(Frame::new(name, attrs, char_offset(input, pos)));
            }
            Event::Empty(e) => {
                top.flush_text();
                let (name, attrs) = element_parts(&e).map_err(|m| xml_err(pos, m))?;
                let node = build_element(name, attrs, Vec::new(), char_offset(input, pos))?;
                top.children.push(node);
            }
            Event::End(_) => {
                let mut frame = stack.pop().expect("balanced");
                if stack.is_empty() {
                    return Err(xml_err(pos, "unexpected closing tag".into()));
                }
                frame.flush_text();
                let node = build_element(frame.name, frame.attrs, frame.children, frame.offset)?;
                stack.last_mut().expect("parent").children.push(node);
            }
            Event::Text(t) => top.pending.push_str(&t.xml10_content()),
            Event::CData(t) => top.pending.push_str(&t.xml10_content()),
            Event::GeneralRef(r) => {
                if let Some(c) = r.resolve_char_ref().map_err(|e| xml_err(pos, e.to_string()))? {
                    top.pending.push(c);
                } else if let Some(s) = resolve_predefined_entity(&r) {
                    top.pending.push_str(s);
                } else {
                    return Err(xml_err(pos, format!("unknown entity &{};", &*r)));
                }
            }
            Event::Comment(_) | Event::Decl(_) | Event::PI(_) | Event::DocType(_) => {}
            Event::Eof => break,
        }
    }

    if stack.len() > 1 {
        let open = stack.last().expect("open frame");
        return Err(SsmlError::Xml {
            offset: open.offset,
            message: format!("unclosed element <{}>", open.name),
        });
    }
    let mut root = stack.pop().expect("root frame");
    root.flush_text();
    Ok(assemble(root.children))
}

fn element_parts(e: &BytesStart<'_>) -> Result<(String, Vec<(String, String)>), String> {
    let name = e.name().as_ref().to_string();
    let mut attrs = Vec::new();
    for a in e.attributes() {
        let a = a.map_err(|err| err.to_string())?;
        let value = a.normalized_value(XmlVersion::Implicit1_0).map_err(|err| err.to_string())?;
        attrs.push((a.key.as_ref().to_string(), value.into_owned()));
    }
    Ok((name, attrs))
}

fn attr<'a>(attrs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn number(attr_name: &str, raw: &str, offset: usize) -> Result<f64, SsmlError> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| SsmlError::NonNumeric {
            attr: attr_name.to_string(),
            value: raw.to_string(),
            offset,
        })
}

fn percent(attr_name: &str, raw: &str, offset: usize) -> Result<f64, SsmlError> {
    let v = raw.trim();
    match v.strip_suffix('%') {
        Some(num) => number(attr_name, num, offset),
        None if number(attr_name, v, offset).is_ok() => Err(SsmlError::MissingUnit {
            attr: attr_name.to_string(),
            value: raw.to_string(),
            offset,
        }),
        None => Err(SsmlError::NonNumeric {
            attr: attr_name.to_string(),
            value: raw.to_string(),
            offset,
        }),
    }
}

/// `"200ms"` or `"0.5s"` in milliseconds. A bare `"0"` is accepted when
/// `bare_zero` is set, as Azure writes silence values that way.
fn duration_ms(attr_name: &str, raw: &str, offset: usize, bare_zero: bool) -> Result<f64, SsmlError> {
    let v = raw.trim();
    if let Some(num) = v.strip_suffix("ms") {
        number(attr_name, num, offset)
    } else if let Some(num) = v.strip_suffix('s') {
        Ok(number(attr_name, num, offset)? * 1000.0)
    } else {
        match number(attr_name, v, offset) {
            Ok(0.0) if bare_zero => Ok(0.0),
            Ok(_) => Err(SsmlError::MissingUnit {
                attr: attr_name.to_string(),
                value: raw.to_string(),
                offset,
            }),
            Err(e) => Err(e),
        }
    }
}

fn build_element(
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<SsmlNode>,
    offset: usize,
) -> Result<SsmlNode, SsmlError> {
    match name.as_str() {
        "prosody" => {
            let get = |key: &str| attr(&attrs, key).map(|v| percent(key, v, offset)).transpose();
            Ok(SsmlNode::Prosody {
                pitch_pct: get("pitch")?,
                rate_pct: get("rate")?,
                volume_pct: get("volume")?,
                children,
            })
        }
        "break" if attr(&attrs, "time").is_some() => {
            let time_ms = duration_ms("time", attr(&attrs, "time").unwrap_or_default(), offset, false)?;
            if time_ms < 0.0 {
                return Err(SsmlError::NegativeBreak { offset });
            }
            Ok(SsmlNode::Break { time_ms })
        }
        "mstts:silence" => {
            let position = match attr(&attrs, "type") {
                Some("leading-exact") => Some(SilencePosition::LeadingExact),
                Some("trailing-exact") => Some(SilencePosition::TrailingExact),
                _ => None,
            };
            match (position, attr(&attrs, "value")) {
                (Some(position), Some(v)) => Ok(SsmlNode::Silence {
                    position,
                    value_ms: duration_ms("value", v, offset, true)?,
                }),
                _ => Ok(SsmlNode::Opaque { name, attrs, children }),
            }
        }
        _ => Ok(SsmlNode::Opaque { name, attrs, children }),
    }
}

fn is_element(node: &SsmlNode, tag: &str) -> bool {
    matches!(node, SsmlNode::Opaque { name, .. } if name == tag)
}

fn assemble(top: Vec<SsmlNode>) -> SsmlDocument {
    let mut doc = SsmlDocument {
        envelope: false,
        ..Default::default()
    };
    let body = match top.as_slice() {
        [SsmlNode::Opaque { name, attrs, children }] if name == "speak" => {
            doc.envelope = true;
            if let Some(lang) = attr(attrs, "xml:lang") {
                doc.lang = lang.to_string();
            }
            children.clone()
        }
        _ => top,
    };

    let has_voices = body.iter().any(|n| is_element(n, "voice"));
    if !has_voices {
        doc.segments.push(body);
        return doc;
    }
    let mut loose = Vec::new();
    let mut voice_seen = false;
    for node in body {
        match node {
            SsmlNode::Opaque { name, attrs, children } if name == "voice" => {
                if !loose.is_empty() {
                    doc.segments.push(std::mem::take(&mut loose));
                }
                if !voice_seen {
                    doc.voice = attr(&attrs, "name").unwrap_or(DEFAULT_VOICE).to_string();
                    voice_seen = true;
                }
                doc.segments.push(children);
            }
            other => loose.push(other),
        }
    }
    if !loose.is_empty() {
        doc.segments.push(loose);
    }
    if doc.lang.is_empty() {
        doc.lang = DEFAULT_LANG.to_string();
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_emitter_example() {
        let doc = parse(r#"<prosody pitch="+2.00%" rate="-1.00%" volume="-10.00%">bonjour</prosody><break time="200ms"/>"#)
            .unwrap();
        assert!(!doc.envelope);
        assert_eq!(
            doc.segments,
            vec![vec![
                SsmlNode::prosody(2.0, -1.0, -10.0, vec![SsmlNode::text("bonjour")]),
                SsmlNode::Break { time_ms: 200.0 },
            ]]
        );
    }

    #[test]
    fn seconds_are_converted() {
        let doc = parse(r#"<break time="0.5s"/>"#).unwrap();
        assert_eq!(doc.segments[0], vec![SsmlNode::Break { time_ms: 500.0 }]);
    }

    #[test]
    fn non_numeric_pitch_reports_offset() {
        let input = r#"abc <prosody pitch="high">x</prosody>"#;
        let err = parse(input).unwrap_err();
        assert!(err.to_string().contains("non-numeric pitch"), "{err}");
        assert_eq!(err.offset(), Some(4));
    }

    #[test]
    fn offsets_count_characters() {
        let input = "éé <prosody pitch=\"high\">x</prosody>";
        assert_eq!(parse(input).unwrap_err().offset(), Some(3));
    }

    #[test]
    fn unit_errors() {
        assert!(matches!(
            parse(r#"<prosody rate="5">x</prosody>"#),
            Err(SsmlError::MissingUnit { .. })
        ));
        assert!(matches!(parse(r#"<break time="200"/>"#), Err(SsmlError::MissingUnit { .. })));
        assert!(matches!(parse(r#"<break time="-200ms"/>"#), Err(SsmlError::NegativeBreak { .. })));
    }

    #[test]
    fn malformed_xml() {
        for bad in ["<prosody>x", "<prosody>x</break>", "a &bogus; b", "x</prosody>"] {
            assert!(matches!(parse(bad), Err(SsmlError::Xml { .. })), "{bad}");
        }
    }

    #[test]
    fn envelope_and_voices() {
        let input = r#"<?xml version="1.0"?>
<speak version="1.0" xmlns="http://www.w3.org/2001/10/synthesis" xml:lang="fr-CA">
  <voice name="fr-CA-Test">un <break time="1s"/></voice>
  <voice name="fr-CA-Test">deux</voice>
</speak>"#;
        let doc = parse(input).unwrap();
        assert!(doc.envelope);
        assert_eq!(doc.lang, "fr-CA");
        assert_eq!(doc.voice, "fr-CA-Test");
        assert_eq!(doc.segments.len(), 2);
        assert_eq!(doc.segment_texts(), vec!["un", "deux"]);
    }

    #[test]
    fn unknown_elements_are_opaque() {
        let doc = parse(r#"<emphasis level="strong">oui</emphasis> <break strength="weak"/>"#).unwrap();
        assert_eq!(
            doc.segments[0],
            vec![
                SsmlNode::Opaque {
                    name: "emphasis".into(),
                    attrs: vec![("level".into(), "strong".into())],
                    children: vec![SsmlNode::text("oui")],
                },
                SsmlNode::Opaque {
                    name: "break".into(),
                    attrs: vec![("strength".into(), "weak".into())],
                    children: vec![],
                },
            ]
        );
    }

    #[test]
    fn text_is_unescaped_and_collapsed() {
        let doc = parse("  a &amp;\n\t &lt;b&gt; &#233;  ").unwrap();
        assert_eq!(doc.segments[0], vec![SsmlNode::text("a & <b> é")]);
    }

    #[test]
    fn silence_directives() {
        let doc = parse(r#"<mstts:silence type="leading-exact" value="0"/><mstts:silence type="Sentenceboundary" value="200ms"/>"#)
            .unwrap();
        assert_eq!(
            doc.segments[0][0],
            SsmlNode::Silence {
                position: SilencePosition::LeadingExact,
                value_ms: 0.0
            }
        );
        assert!(matches!(doc.segments[0][1], SsmlNode::Opaque { .. }));
    }
}
