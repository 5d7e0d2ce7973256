use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::PathBuf;

use prosodika::eval::{corpus_stats, CorpusStats};
use prosodika::records::{read_jsonl_path, DeltaRecord};
use prosodika::ProsodyDelta;
use serde::Serialize;

use crate::CliError;

/// Corpus size in the layout of a dataset summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsTotals {
    pub speakers: usize,
    pub syntagms: usize,
    pub words: usize,
    pub characters: usize,
    /// One per syntagm record.
    pub prosody_tags: usize,
    /// Records with a positive break.
    pub break_tags: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub totals: StatsTotals,
    pub median_pause_ms: f64,
    pub pause_iqr_ms: [f64; 2],
    pub distributions: CorpusStats,
}

impl StatsReport {
    pub fn to_table(&self) -> String {
        let t = &self.totals;
        let mut out = String::new();
        for (k, v) in [
            ("speakers", t.speakers),
            ("syntagms", t.syntagms),
            ("words", t.words),
            ("characters", t.characters),
            ("prosody tags", t.prosody_tags),
            ("break tags", t.break_tags),
        ] {
            writeln!(out, "{k:<14} {v}").unwrap();
        }
        writeln!(
            out,
            "median pause   {} ms (IQR {} to {} ms)\n",
            self.median_pause_ms, self.pause_iqr_ms[0], self.pause_iqr_ms[1]
        )
        .unwrap();
        writeln!(out, "{:<11} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}", "attribute", "min", "q1", "median", "q3", "max", "mean").unwrap();
        for (name, d) in self.distributions.attributes() {
            writeln!(
                out,
                "{name:<11} {:>9.2} {:>9.2} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
                d.min, d.q1, d.median, d.q3, d.max, d.mean
            )
            .unwrap();
        }
        out
    }
}

/// Distribution summary of delta record files. Records without a speaker count
/// their file as the speaker.
pub fn cmd_stats(inputs: &[PathBuf], exclude_injected: bool, bins: usize) -> Result<StatsReport, CliError> {
    let mut speakers = BTreeSet::new();
    let mut records = Vec::new();
    for path in inputs {
        let file_records: Vec<DeltaRecord> = read_jsonl_path(path)?;
        for r in file_records {
            if exclude_injected && r.annotation.flags.pause_injected {
                continue;
            }
            speakers.insert(r.speaker.clone().unwrap_or_else(|| format!("file:{}", path.display())));
            records.push(r);
        }
    }
    if records.is_empty() {
        return Err(CliError::Empty("no delta records".into()));
    }
    let deltas: Vec<ProsodyDelta> = records.iter().map(|r| r.annotation.delta).collect();
    let distributions = corpus_stats(&deltas, bins)?;
    let totals = StatsTotals {
        speakers: speakers.len(),
        syntagms: records.len(),
        words: records.iter().map(|r| r.annotation.text.split_whitespace().count()).sum(),
        characters: records.iter().map(|r| r.annotation.text.chars().count()).sum(),
        prosody_tags: records.len(),
        break_tags: deltas.iter().filter(|d| d.break_ms > 0.0).count(),
    };
    let b = &distributions.break_ms;
    Ok(StatsReport {
        totals,
        median_pause_ms: b.median,
        pause_iqr_ms: [b.q1, b.q3],
        distributions,
    })
}
