//! Scoring of predicted markup against gold, tag census and corpus statistics.

mod arr;
mod attributes;
mod breaks;
mod census;
mod distribution;
mod report;
mod wer;

use thiserror::Error;

pub use arr::{arr, ArrConfig};
pub use attributes::{
    attribute_errors, attribute_errors_corpus, flatten_units, AttributeErrors, ErrorStats, Pooling,
    ScoredUnit,
};
pub use breaks::{break_f1, perplexity, true_label_probabilities, BreakPrediction, F1Score};
pub use census::{tag_census, TagCensus};
pub use distribution::{corpus_stats, histogram_csv, CorpusStats, DistributionSummary, HistogramBin};
pub use report::MetricsReport;
pub use wer::{wer, WerResult};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("prediction and gold do not line up: {0}")]
    Pairing(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("{0}")]
    Domain(String),
}
