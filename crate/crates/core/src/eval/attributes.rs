use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::ssml::{SsmlDocument, SsmlNode};

/// One scored syntagm: its text, its prosody values (0 when absent) and the
/// total break that follows it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredUnit {
    pub text: String,
    pub pitch_pct: f64,
    pub rate_pct: f64,
    pub volume_pct: f64,
    pub break_ms: f64,
}

impl ScoredUnit {
    fn new(text: String) -> Self {
        ScoredUnit {
            text,
            pitch_pct: 0.0,
            rate_pct: 0.0,
            volume_pct: 0.0,
            break_ms: 0.0,
        }
    }
}

/// Splits a segment into units. A prosody element or bare text opens a unit;
/// breaks attach to the open unit. Other elements are looked through.
pub fn flatten_units(nodes: &[SsmlNode]) -> Vec<ScoredUnit> {
    let mut out = Vec::new();
    flatten_into(nodes, &mut out);
    out
}

fn flatten_into(nodes: &[SsmlNode], out: &mut Vec<ScoredUnit>) {
    for node in nodes {
        match node {
            SsmlNode::Prosody {
                pitch_pct,
                rate_pct,
                volume_pct,
                ..
            } => {
                let mut unit = ScoredUnit::new(node.plain_text());
                unit.pitch_pct = pitch_pct.unwrap_or(0.0);
                unit.rate_pct = rate_pct.unwrap_or(0.0);
                unit.volume_pct = volume_pct.unwrap_or(0.0);
                unit.break_ms = inner_breaks(node.children());
                out.push(unit);
            }
            SsmlNode::Text { content } => {
                let text = content.split_whitespace().collect::<Vec<_>>().join(" ");
                if !text.is_empty() {
                    out.push(ScoredUnit::new(text));
                }
            }
            SsmlNode::Break { time_ms } => match out.last_mut() {
                Some(u) => u.break_ms += time_ms,
                None => {
                    // a leading break has no syntagm to attach to
                    let mut u = ScoredUnit::new(String::new());
                    u.break_ms = *time_ms;
                    out.push(u);
                }
            },
            SsmlNode::Silence { .. } => {}
            SsmlNode::Opaque { children, .. } => flatten_into(children, out),
        }
    }
}

fn inner_breaks(nodes: &[SsmlNode]) -> f64 {
    nodes
        .iter()
        .map(|n| match n {
            SsmlNode::Break { time_ms } => *time_ms,
            other => inner_breaks(other.children()),
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorStats {
    pub mae: f64,
    pub rmse: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AttributeErrors {
    pub pitch_pct: ErrorStats,
    pub rate_pct: ErrorStats,
    pub volume_pct: ErrorStats,
    pub break_ms: ErrorStats,
}

/// Micro pools every unit of the corpus; macro averages per-segment scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    #[default]
    Micro,
    Macro,
}

#[derive(Default, Clone, Copy)]
struct Acc {
    abs: f64,
    sq: f64,
    n: usize,
}

impl Acc {
    fn add(&mut self, e: f64) {
        self.abs += e.abs();
        self.sq += e * e;
        self.n += 1;
    }

    fn stats(&self) -> ErrorStats {
        if self.n == 0 {
            return ErrorStats::default();
        }
        let n = self.n as f64;
        ErrorStats {
            mae: self.abs / n,
            rmse: (self.sq / n).sqrt(),
            n: self.n,
        }
    }
}

fn aligned_units(pred: &SsmlDocument, gold: &SsmlDocument) -> Result<Vec<Vec<(ScoredUnit, ScoredUnit)>>, EvalError> {
    if pred.segments.len() != gold.segments.len() {
        return Err(EvalError::Pairing(format!(
            "{} predicted segments vs {} gold segments",
            pred.segments.len(),
            gold.segments.len()
        )));
    }
    let mut out = Vec::new();
    for (s, (ps, gs)) in pred.segments.iter().zip(&gold.segments).enumerate() {
        let (pu, gu) = (flatten_units(ps), flatten_units(gs));
        for (u, (p, g)) in pu.iter().zip(&gu).enumerate() {
            if p.text != g.text {
                return Err(EvalError::Pairing(format!(
                    "segment {s} unit {u}: predicted {:?} vs gold {:?}",
                    p.text, g.text
                )));
            }
        }
        if pu.len() != gu.len() {
            let u = pu.len().min(gu.len());
            return Err(EvalError::Pairing(format!(
                "segment {s} unit {u}: {} predicted units vs {} gold units",
                pu.len(),
                gu.len()
            )));
        }
        out.push(pu.into_iter().zip(gu).collect());
    }
    Ok(out)
}

/// MAE and RMSE per attribute for one document pair, pooled over its units.
pub fn attribute_errors(pred: &SsmlDocument, gold: &SsmlDocument) -> Result<AttributeErrors, EvalError> {
    attribute_errors_corpus(&[(pred, gold)], Pooling::Micro)
}

pub fn attribute_errors_corpus(
    pairs: &[(&SsmlDocument, &SsmlDocument)],
    pooling: Pooling,
) -> Result<AttributeErrors, EvalError> {
    let mut segments: Vec<[Acc; 4]> = Vec::new();
    for (pred, gold) in pairs {
        for seg in aligned_units(pred, gold)? {
            let mut acc = [Acc::default(); 4];
            for (p, g) in seg {
                acc[0].add(p.pitch_pct - g.pitch_pct);
                acc[1].add(p.rate_pct - g.rate_pct);
                acc[2].add(p.volume_pct - g.volume_pct);
                acc[3].add(p.break_ms - g.break_ms);
            }
            segments.push(acc);
        }
    }
    let per_attr = |k: usize| -> ErrorStats {
        match pooling {
            Pooling::Micro => {
                let mut total = Acc::default();
                for s in &segments {
                    total.abs += s[k].abs;
                    total.sq += s[k].sq;
                    total.n += s[k].n;
                }
                total.stats()
            }
            Pooling::Macro => {
                let scored: Vec<ErrorStats> = segments.iter().filter(|s| s[k].n > 0).map(|s| s[k].stats()).collect();
                if scored.is_empty() {
                    return ErrorStats::default();
                }
                let m = scored.len() as f64;
                ErrorStats {
                    mae: scored.iter().map(|e| e.mae).sum::<f64>() / m,
                    rmse: scored.iter().map(|e| e.rmse).sum::<f64>() / m,
                    n: scored.iter().map(|e| e.n).sum(),
                }
            }
        }
    };
    Ok(AttributeErrors {
        pitch_pct: per_attr(0),
        rate_pct: per_attr(1),
        volume_pct: per_attr(2),
        break_ms: per_attr(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssml::parse;

    fn frag(s: &str) -> SsmlDocument {
        parse(s).unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let d = frag(r#"<prosody pitch="+1.00%" rate="-2.00%" volume="+3.00%">a b</prosody><break time="200ms"/> c"#);
        let e = attribute_errors(&d, &d).unwrap();
        assert_eq!(e.pitch_pct.mae, 0.0);
        assert_eq!(e.break_ms.rmse, 0.0);
        assert_eq!(e.pitch_pct.n, 2);
    }

    #[test]
    fn pitch_and_break_arithmetic() {
        let pred = frag(r#"<prosody pitch="+1%">a</prosody> <prosody pitch="+3%">b</prosody><break time="200ms"/>"#);
        let gold = frag(r#"<prosody pitch="+2%">a</prosody> <prosody pitch="+2%">b</prosody><break time="350ms"/>"#);
        let e = attribute_errors(&pred, &gold).unwrap();
        assert!((e.pitch_pct.mae - 1.0).abs() < 1e-12);
        assert!((e.pitch_pct.rmse - 1.0).abs() < 1e-12);
        // the first unit has no break on either side
        assert_eq!(e.break_ms.mae, 75.0);
        let single = attribute_errors(
            &frag(r#"<prosody>x</prosody><break time="200ms"/>"#),
            &frag(r#"<prosody>x</prosody><break time="350ms"/>"#),
        )
        .unwrap();
        assert_eq!((single.break_ms.mae, single.break_ms.rmse), (150.0, 150.0));
    }

    #[test]
    fn text_divergence_is_reported() {
        let err = attribute_errors(&frag("<prosody>a</prosody> <prosody>b</prosody>"), &frag("<prosody>a</prosody> <prosody>c</prosody>"))
            .unwrap_err();
        assert!(err.to_string().contains("unit 1"), "{err}");
        assert!(attribute_errors(&frag("a<break time=\"1ms\"/>"), &frag("a<break time=\"1ms\"/> b")).is_err());
    }

    #[test]
    fn flattening() {
        let d = frag(concat!(
            r#"<mstts:silence type="leading-exact" value="0"/><prosody rate="+1%">un <break time="5ms"/> deux</prosody>"#,
            r#"<mstts:silence type="trailing-exact" value="0"/><break time="100ms"/> <s>trois</s><break time="1s"/>"#
        ));
        let units = flatten_units(&d.segments[0]);
        assert_eq!(units.len(), 2);
        assert_eq!(units[0].text, "un deux");
        assert_eq!(units[0].break_ms, 105.0);
        assert_eq!(units[0].rate_pct, 1.0);
        assert_eq!(units[1].text, "trois");
        assert_eq!(units[1].break_ms, 1000.0);
    }

    #[test]
    fn macro_pooling() {
        let pred = frag(concat!(
            r#"<speak><voice name="v"><prosody pitch="+1%">a</prosody></voice>"#,
            r#"<voice name="v"><prosody pitch="+0%">b</prosody> <prosody pitch="+0%">c</prosody> <prosody pitch="+0%">d</prosody></voice></speak>"#
        ));
        let gold = frag(concat!(
            r#"<speak><voice name="v"><prosody pitch="+0%">a</prosody></voice>"#,
            r#"<voice name="v"><prosody pitch="+0%">b</prosody> <prosody pitch="+0%">c</prosody> <prosody pitch="+0%">d</prosody></voice></speak>"#
        ));
        let micro = attribute_errors_corpus(&[(&pred, &gold)], Pooling::Micro).unwrap();
        let mac = attribute_errors_corpus(&[(&pred, &gold)], Pooling::Macro).unwrap();
        assert!((micro.pitch_pct.mae - 0.25).abs() < 1e-12);
        assert!((mac.pitch_pct.mae - 0.5).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn rmse_dominates_mae(errs in proptest::collection::vec(-50.0f64..50.0, 1..40)) {
            let mut acc = Acc::default();
            for &e in &errs { acc.add(e); }
            let s = acc.stats();
            proptest::prop_assert!(s.rmse >= s.mae - 1e-12 && s.mae >= 0.0);
            let first = errs[0].abs();
            let all_equal = errs.iter().all(|e| e.abs() == first);
            if all_equal {
                proptest::prop_assert!((s.rmse - s.mae).abs() < 1e-9);
            } else {
                proptest::prop_assert!(s.rmse > s.mae);
            }
        }
    }
}
