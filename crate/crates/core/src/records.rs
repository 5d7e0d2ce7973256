//! Line-delimited JSON records exchanged between the pipeline stages.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prosody::Annotation;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

/// One syntagm of the annotated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speaker: Option<String>,
    #[serde(flatten)]
    pub annotation: Annotation,
}

pub fn write_jsonl<T: Serialize>(mut w: impl Write, items: &[T]) -> io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Blank lines are skipped; `source` names the input in errors.
pub fn read_jsonl<T: DeserializeOwned>(r: impl BufRead, source: &str) -> Result<Vec<T>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| RecordError::Io {
            path: source.to_string(),
            source: e,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| RecordError::Parse {
            path: source.to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(item);
    }
    Ok(out)
}

pub fn read_jsonl_path<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>, RecordError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = File::open(path).map_err(|e| RecordError::Io {
        path: name.clone(),
        source: e,
    })?;
    read_jsonl(BufReader::new(file), &name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prosody::{DeltaFlags, ProsodyDelta};

    fn record() -> DeltaRecord {
        DeltaRecord {
            speaker: Some("spk1".into()),
            annotation: Annotation {
                text: "le chat".into(),
                start_ms: 0.0,
                end_ms: 500.0,
                delta: ProsodyDelta {
                    pitch_pct: 1.5,
                    rate_pct: -2.0,
                    volume_pct: 0.0,
                    break_ms: 250.0,
                },
                flags: DeltaFlags {
                    no_pitch: true,
                    ..Default::default()
                },
            },
        }
    }

    #[test]
    fn round_trip() {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &[record(), record()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with(r#"{"speaker":"spk1","text":"le chat","start_ms":0.0,"end_ms":500.0,"pitch_pct":1.5,"#));
        let back: Vec<DeltaRecord> = read_jsonl(&buf[..], "mem").unwrap();
        assert_eq!(back, vec![record(), record()]);
    }

    #[test]
    fn parse_error_names_line() {
        let input = b"\n{\"text\":1}\n";
        match read_jsonl::<DeltaRecord>(&input[..], "x.jsonl") {
            Err(RecordError::Parse { line: 2, path, .. }) => assert_eq!(path, "x.jsonl"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            read_jsonl_path::<DeltaRecord>("/nonexistent/x.jsonl"),
            Err(RecordError::Io { .. })
        ));
    }
}
