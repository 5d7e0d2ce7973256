//! Praat TextGrid reader for the long and short text formats.
//!
//! Both formats carry the same value sequence; the long format only adds
//! `key =` labels and `item [n]:` headings. The tokenizer drops those and the
//! parser walks the remaining numbers, strings and `<exists>` flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TextGridError {
    #[error("line {line}: malformed header: {message}")]
    Header { line: usize, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: intervals out of order: {message}")]
    NonMonotone { line: usize, message: String },
    #[error("line {line}: file ends before the {expected} it announced")]
    Truncated { line: usize, expected: String },
    #[error("cannot decode TextGrid bytes: {0}")]
    Encoding(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start_s: f64,
    pub end_s: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tier {
    pub name: String,
    pub intervals: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Text(String),
    Flag(String),
}

#[derive(Debug, Clone)]
struct Lexeme {
    value: Value,
    line: usize,
}

/// Decodes UTF-8 or UTF-16 (either byte order, detected by BOM or by the
/// position of zero bytes) into a string.
pub fn decode_textgrid(bytes: &[u8]) -> Result<String, TextGridError> {
    let utf16 = |le: bool, body: &[u8]| -> Result<String, TextGridError> {
        if !body.len().is_multiple_of(2) {
            return Err(TextGridError::Encoding("odd byte count in UTF-16 data".into()));
        }
        let units: Vec<u16> = body
            .chunks_exact(2)
            .map(|c| {
                if le {
                    u16::from_le_bytes([c[0], c[1]])
                } else {
                    u16::from_be_bytes([c[0], c[1]])
                }
            })
            .collect();
        String::from_utf16(&units).map_err(|e| TextGridError::Encoding(e.to_string()))
    };
    match bytes {
        [0xFF, 0xFE, rest @ ..] => utf16(true, rest),
        [0xFE, 0xFF, rest @ ..] => utf16(false, rest),
        [0xEF, 0xBB, 0xBF, rest @ ..] => {
            String::from_utf8(rest.to_vec()).map_err(|e| TextGridError::Encoding(e.to_string()))
        }
        [a, 0, ..] if *a != 0 => utf16(true, bytes),
        [0, b, ..] if *b != 0 => utf16(false, bytes),
        _ => String::from_utf8(bytes.to_vec()).map_err(|e| TextGridError::Encoding(e.to_string())),
    }
}

pub fn read_textgrid(path: impl AsRef<Path>) -> Result<Vec<Tier>, TextGridError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| TextGridError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_textgrid(&decode_textgrid(&bytes)?)
}

/// Parses a TextGrid and returns its interval tiers. Point tiers are skipped.
pub fn parse_textgrid(text: &str) -> Result<Vec<Tier>, TextGridError> {
    let lexemes = tokenize(text)?;
    let mut cursor = Cursor {
        lexemes: &lexemes,
        pos: 0,
    };

    let file_type = cursor.text("file type")?;
    if file_type.0 != "ooTextFile" {
        return Err(TextGridError::Header {
            line: file_type.1,
            message: format!("expected \"ooTextFile\", found {:?}", file_type.0),
        });
    }
    let class = cursor.text("object class")?;
    if class.0 != "TextGrid" {
        return Err(TextGridError::Header {
            line: class.1,
            message: format!("expected \"TextGrid\", found {:?}", class.0),
        });
    }
    let (xmin, _) = cursor.number("grid xmin")?;
    let (xmax, line) = cursor.number("grid xmax")?;
    if xmax < xmin {
        return Err(TextGridError::Header {
            line,
            message: format!("grid xmax {xmax} < xmin {xmin}"),
        });
    }
    let (flag, line) = cursor.flag("tiers flag")?;
    let tier_count = match flag.as_str() {
        "exists" => cursor.count("tier count")?,
        "absent" => 0,
        other => {
            return Err(TextGridError::Header {
                line,
                message: format!("unknown tiers flag <{other}>"),
            })
        }
    };

    let mut tiers = Vec::new();
    for _ in 0..tier_count {
        let (class, class_line) = cursor.text("tier class")?;
        let (name, _) = cursor.text("tier name")?;
        cursor.number("tier xmin")?;
        cursor.number("tier xmax")?;
        let n = cursor.count("interval count")?;
        match class.as_str() {
            "IntervalTier" => {
                let mut intervals: Vec<Interval> = Vec::with_capacity(n);
                for _ in 0..n {
                    let (start_s, start_line) = cursor.number("interval xmin")?;
                    let (end_s, end_line) = cursor.number("interval xmax")?;
                    let (label, _) = cursor.text("interval text")?;
                    if end_s < start_s {
                        return Err(TextGridError::NonMonotone {
                            line: end_line,
                            message: format!("xmax {end_s} < xmin {start_s}"),
                        });
                    }
                    if let Some(prev) = intervals.last() {
                        if start_s < prev.end_s - 1e-9 {
                            return Err(TextGridError::NonMonotone {
                                line: start_line,
                                message: format!(
                                    "xmin {start_s} precedes previous xmax {}",
                                    prev.end_s
                                ),
                            });
                        }
                    }
                    intervals.push(Interval {
                        start_s,
                        end_s,
                        label,
                    });
                }
                tiers.push(Tier { name, intervals });
            }
            "TextTier" => {
                for _ in 0..n {
                    cursor.number("point time")?;
                    cursor.text("point mark")?;
                }
            }
            other => {
                return Err(TextGridError::Syntax {
                    line: class_line,
                    message: format!("unknown tier class {other:?}"),
                })
            }
        }
    }
    Ok(tiers)
}

struct Cursor<'a> {
    lexemes: &'a [Lexeme],
    pos: usize,
}

impl Cursor<'_> {
    fn next(&mut self, expected: &str) -> Result<&Lexeme, TextGridError> {
        let lex = self.lexemes.get(self.pos).ok_or_else(|| TextGridError::Truncated {
            line: self.lexemes.last().map_or(1, |l| l.line),
            expected: expected.to_string(),
        })?;
        self.pos += 1;
        Ok(lex)
    }

    fn number(&mut self, expected: &str) -> Result<(f64, usize), TextGridError> {
        let lex = self.next(expected)?;
        match lex.value {
            Value::Number(v) => Ok((v, lex.line)),
            ref other => Err(TextGridError::Syntax {
                line: lex.line,
                message: format!("expected {expected} (a number), found {other:?}"),
            }),
        }
    }

    fn count(&mut self, expected: &str) -> Result<usize, TextGridError> {
        let (v, line) = self.number(expected)?;
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(TextGridError::Syntax {
                line,
                message: format!("{expected} must be a non-negative integer, found {v}"),
            });
        }
        Ok(v as usize)
    }

    fn text(&mut self, expected: &str) -> Result<(String, usize), TextGridError> {
        let lex = self.next(expected)?;
        match &lex.value {
            Value::Text(s) => Ok((s.clone(), lex.line)),
            other => Err(TextGridError::Syntax {
                line: lex.line,
                message: format!("expected {expected} (a quoted string), found {other:?}"),
            }),
        }
    }

    fn flag(&mut self, expected: &str) -> Result<(String, usize), TextGridError> {
        let lex = self.next(expected)?;
        match &lex.value {
            Value::Flag(s) => Ok((s.clone(), lex.line)),
            other => Err(TextGridError::Syntax {
                line: lex.line,
                message: format!("expected {expected}, found {other:?}"),
            }),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Lexeme>, TextGridError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '"' => {
                let start_line = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') if chars.peek() == Some(&'"') => {
                            chars.next();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            s.push(ch);
                        }
                        None => {
                            return Err(TextGridError::Truncated {
                                line: start_line,
                                expected: "closing quote".into(),
                            })
                        }
                    }
                }
                out.push(Lexeme {
                    value: Value::Text(s),
                    line: start_line,
                });
            }
            '<' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('>') => break,
                        Some('\n') | None => {
                            return Err(TextGridError::Syntax {
                                line,
                                message: "unterminated <flag>".into(),
                            })
                        }
                        Some(ch) => s.push(ch),
                    }
                }
                out.push(Lexeme {
                    value: Value::Flag(s),
                    line,
                });
            }
            '[' => {
                // `item [1]:` style headings
                for ch in chars.by_ref() {
                    if ch == ']' {
                        break;
                    }
                    if ch == '\n' {
                        line += 1;
                    }
                }
            }
            '!' => {
                for ch in chars.by_ref() {
                    if ch == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            '=' | ':' | '?' => {
                chars.next();
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || matches!(d, '.' | '-' | '+') {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let v: f64 = s.parse().map_err(|_| TextGridError::Syntax {
                    line,
                    message: format!("bad number {s:?}"),
                })?;
                if !v.is_finite() {
                    return Err(TextGridError::Syntax {
                        line,
                        message: format!("non-finite number {s:?}"),
                    });
                }
                out.push(Lexeme {
                    value: Value::Number(v),
                    line,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                // a key such as `xmin` or `intervals`
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        chars.next();
                    } else {
                        break;
                    }
                }
            }
            other => {
                return Err(TextGridError::Syntax {
                    line,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const LONG: &str = r#"File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1.5
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "words"
        xmin = 0
        xmax = 1.5
        intervals: size = 2
        intervals [1]:
            xmin = 0
            xmax = 1
            text = "bonjour"
        intervals [2]:
            xmin = 1
            xmax = 1.5
            text = ""
"#;

    const SHORT: &str = r#"File type = "ooTextFile"
Object class = "TextGrid"

0
1.5
<exists>
1
"IntervalTier"
"words"
0
1.5
2
0
1
"bonjour"
1
1.5
""
"#;

    #[test]
    fn long_format() {
        let tiers = parse_textgrid(LONG).unwrap();
        assert_eq!(tiers.len(), 1);
        assert_eq!(tiers[0].name, "words");
        assert_eq!(
            tiers[0].intervals,
            vec![
                Interval {
                    start_s: 0.0,
                    end_s: 1.0,
                    label: "bonjour".into()
                },
                Interval {
                    start_s: 1.0,
                    end_s: 1.5,
                    label: "".into()
                },
            ]
        );
    }

    #[test]
    fn short_format_matches_long() {
        assert_eq!(parse_textgrid(SHORT).unwrap(), parse_textgrid(LONG).unwrap());
    }

    #[test]
    fn reversed_interval_names_its_line() {
        let bad = LONG.replace("xmax = 1\n", "xmax = -0.5\n");
        let err = parse_textgrid(&bad).unwrap_err();
        assert_eq!(
            err,
            TextGridError::NonMonotone {
                line: 17,
                message: "xmax -0.5 < xmin 0".into()
            }
        );
    }

    #[test]
    fn truncated_file() {
        let cut = &LONG[..LONG.find("intervals [2]").unwrap()];
        assert!(matches!(
            parse_textgrid(cut),
            Err(TextGridError::Truncated { .. })
        ));
    }

    #[test]
    fn wrong_header() {
        let bad = LONG.replace("\"TextGrid\"", "\"Sound\"");
        assert!(matches!(
            parse_textgrid(&bad),
            Err(TextGridError::Header { line: 2, .. })
        ));
    }

    #[test]
    fn quotes_and_multiline_labels() {
        let grid = SHORT.replace("\"bonjour\"", "\"il a dit \"\"oui\"\"\nbien\"");
        let tiers = parse_textgrid(&grid).unwrap();
        assert_eq!(tiers[0].intervals[0].label, "il a dit \"oui\"\nbien");
    }

    #[test]
    fn utf16_with_bom() {
        let mut bytes = vec![0xFF, 0xFE];
        for unit in LONG.replace("bonjour", "été").encode_utf16() {
            bytes.extend_from_slice(&unit.to_le_bytes());
        }
        let text = decode_textgrid(&bytes).unwrap();
        assert_eq!(parse_textgrid(&text).unwrap()[0].intervals[0].label, "été");
    }

    #[test]
    fn point_tiers_are_skipped() {
        let grid = r#"File type = "ooTextFile"
Object class = "TextGrid"
0
2
<exists>
2
"TextTier"
"events"
0
2
1
0.5
"click"
"IntervalTier"
"words"
0
2
1
0
2
"salut"
"#;
        let tiers = parse_textgrid(grid).unwrap();
        assert_eq!(tiers.len(), 1);
        assert_eq!(tiers[0].name, "words");
    }
}
