use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{AttributeErrors, F1Score, TagCensus, WerResult};

/// Everything `score` can report; metrics whose inputs were not supplied stay `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breaks: Option<F1Score>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perplexity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attributes: Option<AttributeErrors>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wer: Option<WerResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_pred: Option<TagCensus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_gold: Option<TagCensus>,
}

impl MetricsReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut row = |k: &str, v: String| writeln!(out, "{k:<24} {v}").unwrap();
        if let Some(b) = &self.breaks {
            row("break precision", format!("{:.4}", b.precision));
            row("break recall", format!("{:.4}", b.recall));
            row("break f1", format!("{:.4}", b.f1));
        }
        if let Some(p) = self.perplexity {
            row("perplexity", format!("{p:.4}"));
        }
        if let Some(a) = &self.attributes {
            for (name, e) in [
                ("pitch %", a.pitch_pct),
                ("rate %", a.rate_pct),
                ("volume %", a.volume_pct),
                ("break ms", a.break_ms),
            ] {
                row(&format!("{name} mae / rmse"), format!("{:.4} / {:.4} (n={})", e.mae, e.rmse, e.n));
            }
        }
        if let Some(w) = &self.wer {
            row(
                "wer",
                format!(
                    "{:.4} (S={} D={} I={} N={})",
                    w.wer, w.substitutions, w.deletions, w.insertions, w.reference_len
                ),
            );
        }
        if let Some(a) = self.arr {
            row("arr", format!("{a:.4}"));
        }
        for (label, c) in [("pred", &self.census_pred), ("gold", &self.census_gold)] {
            if let Some(c) = c {
                row(
                    &format!("tags per segment ({label})"),
                    format!("prosody {:.2}, break {:.2}", c.prosody_per_segment, c.break_per_segment),
                );
            }
        }
        out
    }
}
