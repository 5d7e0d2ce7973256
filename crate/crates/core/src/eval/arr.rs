use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrConfig {
    pub tau_ms: f64,
    pub window_s: f64,
}

impl Default for ArrConfig {
    fn default() -> Self {
        ArrConfig {
            tau_ms: 50.0,
            window_s: 15.0,
        }
    }
}

/// Alignment rate: per fixed window of the gold timeline (anchored at 0), the
/// fraction of words whose predicted start is within `tau_ms` of gold, averaged
/// over the windows that hold words.
pub fn arr(pred_starts: &[f64], gold_starts: &[f64], cfg: &ArrConfig) -> Result<f64, EvalError> {
    if pred_starts.len() != gold_starts.len() {
        return Err(EvalError::Pairing(format!(
            "{} predicted starts vs {} gold starts",
            pred_starts.len(),
            gold_starts.len()
        )));
    }
    if gold_starts.is_empty() {
        return Err(EvalError::Empty("no word starts".into()));
    }
    if !(cfg.tau_ms >= 0.0 && cfg.window_s > 0.0) {
        return Err(EvalError::Domain(format!("bad ARR settings {cfg:?}")));
    }
    let window_ms = cfg.window_s * 1000.0;
    let mut windows: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for (p, g) in pred_starts.iter().zip(gold_starts) {
        let slot = windows.entry((g / window_ms).floor() as i64).or_default();
        slot.1 += 1;
        if (p - g).abs() <= cfg.tau_ms {
            slot.0 += 1;
        }
    }
    let total: f64 = windows.values().map(|&(hit, n)| hit as f64 / n as f64).sum();
    Ok(total / windows.len() as f64)
}
