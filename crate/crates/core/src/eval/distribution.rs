use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::prosody::ProsodyDelta;
use crate::stats::median_sorted;

/// Five-number summary. Quartiles are the medians of the lower and upper
/// halves, the overall median excluded when the count is odd.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub pitch_pct: DistributionSummary,
    pub rate_pct: DistributionSummary,
    pub volume_pct: DistributionSummary,
    pub break_ms: DistributionSummary,
}

impl CorpusStats {
    pub fn attributes(&self) -> [(&'static str, &DistributionSummary); 4] {
        [
            ("pitch_pct", &self.pitch_pct),
            ("rate_pct", &self.rate_pct),
            ("volume_pct", &self.volume_pct),
            ("break_ms", &self.break_ms),
        ]
    }
}

impl DistributionSummary {
    pub fn new(values: &[f64], bins: usize) -> Result<Self, EvalError> {
        if values.is_empty() {
            return Err(EvalError::Empty("no values to summarise".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(EvalError::Domain(format!("non-finite value {bad}")));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = median_sorted(&sorted);
        let (q1, q3) = if n == 1 {
            (median, median)
        } else {
            let half = n / 2;
            let lower = &sorted[..half];
            let upper = &sorted[n - half..];
            (median_sorted(lower), median_sorted(upper))
        };
        Ok(DistributionSummary {
            count: n,
            min: sorted[0],
            q1,
            median,
            q3,
            max: sorted[n - 1],
            mean: sorted.iter().sum::<f64>() / n as f64,
            histogram: histogram(&sorted, bins.max(1)),
        })
    }
}

/// Equal-width bins over `[min, max]`, the last one closed. A constant series
/// yields a single zero-width bin.
fn histogram(sorted: &[f64], bins: usize) -> Vec<HistogramBin> {
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if lo == hi {
        return vec![HistogramBin {
            start: lo,
            end: hi,
            count: sorted.len(),
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|k| HistogramBin {
            start: lo + k as f64 * width,
            end: if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width },
            count: 0,
        })
        .collect();
    for &v in sorted {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        out[k].count += 1;
    }
    out
}

pub fn corpus_stats(deltas: &[ProsodyDelta], bins: usize) -> Result<CorpusStats, EvalError> {
    let col = |f: fn(&ProsodyDelta) -> f64| deltas.iter().map(f).collect::<Vec<_>>();
    Ok(CorpusStats {
        pitch_pct: DistributionSummary::new(&col(|d| d.pitch_pct), bins)?,
        rate_pct: DistributionSummary::new(&col(|d| d.rate_pct), bins)?,
        volume_pct: DistributionSummary::new(&col(|d| d.volume_pct), bins)?,
        break_ms: DistributionSummary::new(&col(|d| d.break_ms), bins)?,
    })
}

/// `attribute,bin_start,bin_end,count` rows for plotting.
pub fn histogram_csv(stats: &CorpusStats) -> String {
    let mut out = String::from("attribute,bin_start,bin_end,count\n");
    for (name, summary) in stats.attributes() {
        for b in &summary.histogram {
            writeln!(out, "{name},{},{},{}", b.start, b.end, b.count).unwrap();
        }
    }
    out
}
