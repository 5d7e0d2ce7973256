use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// Word indices followed by a break, over a word sequence of known length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakPrediction {
    pub word_count: usize,
    pub positions: BTreeSet<usize>,
    /// Per-word probability that a break follows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
}

impl BreakPrediction {
    pub fn new(word_count: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self, EvalError> {
        let p = BreakPrediction {
            word_count,
            positions: positions.into_iter().collect(),
            probabilities: None,
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<(), EvalError> {
        if let Some(&last) = self.positions.iter().next_back() {
            if last >= self.word_count {
                return Err(EvalError::Domain(format!(
                    "break position {last} outside {} words",
                    self.word_count
                )));
            }
        }
        if let Some(p) = &self.probabilities {
            if p.len() != self.word_count {
                return Err(EvalError::Domain(format!(
                    "{} probabilities for {} words",
                    p.len(),
                    self.word_count
                )));
            }
            if let Some(bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(EvalError::Domain(format!("probability {bad} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Score {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Position-set precision, recall and F1.
///
/// Two empty sets agree perfectly and score 1. Otherwise an empty denominator
/// gives 0 for that ratio.
pub fn break_f1(pred: &BreakPrediction, gold: &BreakPrediction) -> Result<F1Score, EvalError> {
    if pred.word_count != gold.word_count {
        return Err(EvalError::Pairing(format!(
            "{} predicted words vs {} gold words",
            pred.word_count, gold.word_count
        )));
    }
    if pred.positions.is_empty() && gold.positions.is_empty() {
        return Ok(F1Score {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        });
    }
    let tp = pred.positions.intersection(&gold.positions).count() as f64;
    let ratio = |num: f64, den: usize| if den == 0 { 0.0 } else { num / den as f64 };
    let precision = ratio(tp, pred.positions.len());
    let recall = ratio(tp, gold.positions.len());
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(F1Score {
        precision,
        recall,
        f1,
    })
}

/// `exp` of the mean negative log probability. Any zero probability makes the
/// result infinite.
pub fn perplexity(probabilities: &[f64]) -> Result<f64, EvalError> {
    if probabilities.is_empty() {
        return Err(EvalError::Empty("no probabilities".into()));
    }
    if let Some(bad) = probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(EvalError::Domain(format!("probability {bad} outside [0, 1]")));
    }
    if probabilities.contains(&0.0) {
        return Ok(f64::INFINITY);
    }
    let ce = -probabilities.iter().map(|p| p.ln()).sum::<f64>() / probabilities.len() as f64;
    Ok(ce.exp())
}

/// Probability the predictor gave to the gold label of each word.
pub fn true_label_probabilities(pred: &BreakPrediction, gold: &BreakPrediction) -> Result<Vec<f64>, EvalError> {
    if pred.word_count != gold.word_count {
        return Err(EvalError::Pairing(format!(
            "{} predicted words vs {} gold words",
            pred.word_count, gold.word_count
        )));
    }
    let probs = pred
        .probabilities
        .as_ref()
        .ok_or_else(|| EvalError::Empty("prediction carries no probabilities".into()))?;
    Ok(probs
        .iter()
        .enumerate()
        .map(|(i, &p)| if gold.positions.contains(&i) { p } else { 1.0 - p })
        .collect())
}
