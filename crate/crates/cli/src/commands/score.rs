use std::path::{Path, PathBuf};

use prosodika::alignment::TokenKind;
use prosodika::eval::{
    arr, attribute_errors_corpus, break_f1, perplexity, tag_census, true_label_probabilities, wer,
    BreakPrediction, MetricsReport, Pooling,
};
use prosodika::records::read_jsonl_path;
use prosodika::SsmlDocument;

use crate::commands::annotate::load_tokens;
use crate::{read_ssml, ssml_files, CliError, EffectiveConfig};

#[derive(Debug, Clone, Default)]
pub struct ScoreInputs {
    /// Files or directories of `*.ssml`; directories pair files by relative name.
    pub pred: PathBuf,
    pub gold: PathBuf,
    pub pred_breaks: Option<PathBuf>,
    pub gold_breaks: Option<PathBuf>,
    pub pred_alignment: Option<PathBuf>,
    pub gold_alignment: Option<PathBuf>,
    pub pooling: Pooling,
}

fn relative_names(root: &Path, files: &[PathBuf]) -> Vec<PathBuf> {
    files
        .iter()
        .map(|f| f.strip_prefix(root).unwrap_or(f).to_path_buf())
        .collect()
}

fn load_side(root: &Path) -> Result<Vec<(PathBuf, SsmlDocument)>, CliError> {
    let files = ssml_files(&[root.to_path_buf()])?;
    let names = if root.is_dir() {
        relative_names(root, &files)
    } else {
        vec![PathBuf::new(); files.len()]
    };
    names
        .into_iter()
        .zip(&files)
        .map(|(n, f)| Ok((n, read_ssml(f)?)))
        .collect()
}

/// Concatenates per-line predictions into one sequence.
fn merged_breaks(path: &Path) -> Result<BreakPrediction, CliError> {
    let items: Vec<BreakPrediction> = read_jsonl_path(path)?;
    if items.is_empty() {
        return Err(CliError::Empty(format!("{}: no break records", path.display())));
    }
    let mut merged = BreakPrediction {
        word_count: 0,
        positions: Default::default(),
        probabilities: Some(Vec::new()),
    };
    for (line, item) in items.into_iter().enumerate() {
        item.check().map_err(|e| CliError::from(e).context(format!("{} record {}", path.display(), line + 1)))?;
        merged.positions.extend(item.positions.iter().map(|p| p + merged.word_count));
        merged.word_count += item.word_count;
        merged.probabilities = match (merged.probabilities, item.probabilities) {
            (Some(mut acc), Some(p)) => {
                acc.extend(p);
                Some(acc)
            }
            _ => None,
        };
    }
    Ok(merged)
}

/// Scores a predicted corpus against gold.
pub fn cmd_score(inputs: &ScoreInputs, cfg: &EffectiveConfig) -> Result<MetricsReport, CliError> {
    let pred = load_side(&inputs.pred)?;
    let gold = load_side(&inputs.gold)?;
    if pred.is_empty() || gold.is_empty() {
        return Err(CliError::Empty("no SSML documents to score".into()));
    }
    for (name, _) in &gold {
        if !pred.iter().any(|(n, _)| n == name) {
            return Err(CliError::Pairing(format!("prediction missing for {}", name.display())));
        }
    }
    if let Some((name, _)) = pred.iter().find(|(n, _)| !gold.iter().any(|(g, _)| g == n)) {
        return Err(CliError::Pairing(format!("no gold document for {}", name.display())));
    }
    let pairs: Vec<(&SsmlDocument, &SsmlDocument)> = gold
        .iter()
        .map(|(name, g)| {
            let p = &pred.iter().find(|(n, _)| n == name).expect("checked above").1;
            (p, g)
        })
        .collect();

    let mut report = MetricsReport {
        attributes: Some(
            attribute_errors_corpus(&pairs, inputs.pooling)
                .map_err(|e| CliError::from(e).context(format!("{} vs {}", inputs.pred.display(), inputs.gold.display())))?,
        ),
        census_pred: Some(tag_census(pairs.iter().map(|p| p.0))),
        census_gold: Some(tag_census(pairs.iter().map(|p| p.1))),
        ..Default::default()
    };

    match (&inputs.pred_breaks, &inputs.gold_breaks) {
        (Some(p), Some(g)) => {
            let (p, g) = (merged_breaks(p)?, merged_breaks(g)?);
            report.breaks = Some(break_f1(&p, &g)?);
            if p.probabilities.is_some() {
                report.perplexity = Some(perplexity(&true_label_probabilities(&p, &g)?)?);
            }
        }
        (None, None) => {}
        _ => return Err(CliError::Format("--pred-breaks and --gold-breaks go together".into())),
    }

    match (&inputs.pred_alignment, &inputs.gold_alignment) {
        (Some(p), Some(g)) => {
            let words = |path: &Path| -> Result<Vec<(String, f64)>, CliError> {
                Ok(load_tokens(path, cfg.options.tier.as_deref())?
                    .into_iter()
                    .filter(|t| t.kind == TokenKind::Word)
                    .map(|t| (t.text, t.start_ms))
                    .collect())
            };
            let (pw, gw) = (words(p)?, words(g)?);
            let text = |w: &[(String, f64)]| w.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
            report.wer = Some(wer(&text(&gw), &text(&pw))?);
            let starts = |w: &[(String, f64)]| w.iter().map(|x| x.1).collect::<Vec<_>>();
            report.arr = Some(arr(&starts(&pw), &starts(&gw), &cfg.arr())?);
        }
        (None, None) => {}
        _ => return Err(CliError::Format("--pred-alignment and --gold-alignment go together".into())),
    }
    Ok(report)
}
