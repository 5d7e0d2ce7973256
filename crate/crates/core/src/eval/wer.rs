use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WerResult {
    pub wer: f64,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub reference_len: usize,
}

/// Word error rate by unit-cost edit distance. Among optimal alignments the
/// backtrace prefers substitution, then deletion, then insertion.
pub fn wer<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Result<WerResult, EvalError> {
    let (r, h) = (reference.len(), hypothesis.len());
    if r == 0 {
        return Err(EvalError::Domain("reference is empty".into()));
    }
    let cols = h + 1;
    let mut d = vec![0usize; (r + 1) * cols];
    for i in 0..=r {
        d[i * cols] = i;
    }
    for j in 0..=h {
        d[j] = j;
    }
    for i in 1..=r {
        for j in 1..=h {
            let sub = usize::from(reference[i - 1].as_ref() != hypothesis[j - 1].as_ref());
            d[i * cols + j] = (d[(i - 1) * cols + j - 1] + sub)
                .min(d[(i - 1) * cols + j] + 1)
                .min(d[i * cols + j - 1] + 1);
        }
    }

    let (mut s, mut del, mut ins) = (0, 0, 0);
    let (mut i, mut j) = (r, h);
    while i > 0 || j > 0 {
        let here = d[i * cols + j];
        if i > 0 && j > 0 {
            let differs = reference[i - 1].as_ref() != hypothesis[j - 1].as_ref();
            if d[(i - 1) * cols + j - 1] + usize::from(differs) == here {
                s += usize::from(differs);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[(i - 1) * cols + j] + 1 == here {
            del += 1;
            i -= 1;
        } else {
            ins += 1;
            j -= 1;
        }
    }
    Ok(WerResult {
        wer: (s + del + ins) as f64 / r as f64,
        substitutions: s,
        deletions: del,
        insertions: ins,
        reference_len: r,
    })
}
