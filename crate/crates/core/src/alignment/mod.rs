//! Word/pause streams from time-aligned transcripts, and syntagm segmentation.

mod lexicon;
mod textgrid;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexicon::{fold_word, FunctionWordLexicon};
pub use textgrid::{decode_textgrid, parse_textgrid, read_textgrid, Interval, Tier, TextGridError};

#[derive(Debug, Error, PartialEq)]
pub enum AlignmentError {
    #[error(transparent)]
    TextGrid(#[from] TextGridError),
    #[error("no interval tier named {0:?}")]
    MissingTier(String),
    #[error("TextGrid has no interval tiers")]
    NoTiers,
    #[error("word sequences diverge at word {index}: natural {natural:?}, synthetic {synthetic:?}")]
    Pairing {
        index: usize,
        natural: Option<String>,
        synthetic: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Pause,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    /// Empty for pauses.
    pub text: String,
    pub start_ms: f64,
    pub end_ms: f64,
}

impl Token {
    pub fn word(text: impl Into<String>, start_ms: f64, end_ms: f64) -> Self {
        Token {
            kind: TokenKind::Word,
            text: text.into(),
            start_ms,
            end_ms,
        }
    }

    pub fn pause(start_ms: f64, end_ms: f64) -> Self {
        Token {
            kind: TokenKind::Pause,
            text: String::new(),
            start_ms,
            end_ms,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn duration_ms(&self) -> f64 {
        self.end_ms - self.start_ms
    }
}

/// How a syntagm's trailing pause was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauseOrigin {
    /// Measured from the alignment.
    Observed,
    /// Measured, then raised to the sentence-final minimum.
    Clamped,
    /// No pause in the alignment; the sentence-final minimum was inserted.
    Injected,
    /// Last syntagm of the stream with no boundary.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Syntagm {
    pub words: Vec<Token>,
    pub text: String,
    pub start_ms: f64,
    pub end_ms: f64,
    /// Sum of word durations.
    pub net_duration_s: f64,
    pub word_count: usize,
    pub trailing_pause_ms: f64,
    pub pause_origin: PauseOrigin,
}

impl Syntagm {
    fn from_words(words: Vec<Token>, trailing_pause_ms: f64, pause_origin: PauseOrigin) -> Self {
        debug_assert!(!words.is_empty());
        let text = words
            .iter()
            .map(|w| w.text.trim())
            .collect::<Vec<_>>()
            .join(" ");
        let net_ms: f64 = words.iter().map(Token::duration_ms).sum();
        Syntagm {
            text,
            start_ms: words[0].start_ms,
            end_ms: words[words.len() - 1].end_ms,
            net_duration_s: net_ms / 1000.0,
            word_count: words.len(),
            trailing_pause_ms,
            pause_origin,
            words,
        }
    }
}

/// Picks the tier named `name`, or the first interval tier when `name` is `None`.
pub fn select_tier<'a>(tiers: &'a [Tier], name: Option<&str>) -> Result<&'a Tier, AlignmentError> {
    match name {
        Some(n) => tiers
            .iter()
            .find(|t| t.name == n)
            .ok_or_else(|| AlignmentError::MissingTier(n.to_string())),
        None => tiers.first().ok_or(AlignmentError::NoTiers),
    }
}

/// Seconds to milliseconds, rounded to the microsecond so that decimal
/// TextGrid times give exact durations.
fn to_ms(s: f64) -> f64 {
    (s * 1e6).round() / 1e3
}

/// Blank labels become pauses, other labels words; adjacent pauses merge.
pub fn tokens_from_tier(tier: &Tier) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tier.intervals.len());
    for iv in &tier.intervals {
        let (start_ms, end_ms) = (to_ms(iv.start_s), to_ms(iv.end_s));
        if end_ms <= start_ms {
            continue;
        }
        let label = iv.label.trim();
        if label.is_empty() {
            match out.last_mut() {
                Some(prev) if !prev.is_word() => prev.end_ms = end_ms,
                _ => out.push(Token::pause(start_ms, end_ms)),
            }
        } else {
            out.push(Token::word(label, start_ms, end_ms));
        }
    }
    out
}

/// Drops each pause that directly follows a function word, giving its time
/// to that word so the timeline keeps its length.
pub fn filter_function_word_pauses(tokens: &[Token], lexicon: &FunctionWordLexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for tok in tokens {
        if !tok.is_word() {
            if let Some(prev) = out.last_mut() {
                if prev.is_word() && lexicon.contains(&prev.text) {
                    prev.end_ms = tok.end_ms;
                    continue;
                }
            }
        }
        out.push(tok.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationConfig {
    pub sentence_final: Vec<char>,
    pub min_final_pause_ms: f64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig {
            sentence_final: vec!['.', '?', '!'],
            min_final_pause_ms: 500.0,
        }
    }
}

impl SegmentationConfig {
    /// Checks the last character after stripping closing quotes and brackets.
    pub fn ends_sentence(&self, word: &str) -> bool {
        word.trim_end()
            .trim_end_matches(['"', '\'', '»', '”', '’', ')', ']', '}', ' ', '\u{a0}'])
            .chars()
            .last()
            .is_some_and(|c| self.sentence_final.contains(&c))
    }
}

/// Splits the stream at every pause.
///
/// A pause after a sentence-final word is raised to the configured minimum,
/// and a sentence-final word followed directly by another word (or ending the
/// stream) gets an injected pause of that minimum.
pub fn segment_syntagms(tokens: &[Token], cfg: &SegmentationConfig) -> Vec<Syntagm> {
    let mut out = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if tok.is_word() {
            current.push(tok.clone());
            let next_is_pause = tokens.get(i + 1).is_some_and(|t| !t.is_word());
            if cfg.ends_sentence(&tok.text) && !next_is_pause {
                out.push(Syntagm::from_words(
                    std::mem::take(&mut current),
                    cfg.min_final_pause_ms,
                    PauseOrigin::Injected,
                ));
            }
        } else if let Some(last) = current.last() {
            let observed = tok.duration_ms();
            let (pause, origin) =
                if cfg.ends_sentence(&last.text) && observed < cfg.min_final_pause_ms {
                    (cfg.min_final_pause_ms, PauseOrigin::Clamped)
                } else {
                    (observed, PauseOrigin::Observed)
                };
            out.push(Syntagm::from_words(
                std::mem::take(&mut current),
                pause,
                origin,
            ));
        }
    }
    if !current.is_empty() {
        out.push(Syntagm::from_words(current, 0.0, PauseOrigin::None));
    }
    out
}

/// Cuts a second rendering of the same transcript along the word spans of
/// `reference` syntagms. Trailing pauses come from the second stream.
pub fn project_syntagms(
    reference: &[Syntagm],
    tokens: &[Token],
) -> Result<Vec<Syntagm>, AlignmentError> {
    let mut out = Vec::with_capacity(reference.len());
    let mut pos = 0usize;
    let mut word_index = 0usize;
    for syn in reference {
        let mut words = Vec::with_capacity(syn.word_count);
        for expected in &syn.words {
            while pos < tokens.len() && !tokens[pos].is_word() {
                pos += 1;
            }
            let got = tokens.get(pos);
            if got.map(|t| fold_word(&t.text)) != Some(fold_word(&expected.text)) {
                return Err(AlignmentError::Pairing {
                    index: word_index,
                    natural: Some(expected.text.clone()),
                    synthetic: got.map(|t| t.text.clone()),
                });
            }
            words.push(tokens[pos].clone());
            pos += 1;
            word_index += 1;
        }
        let (pause, origin) = match tokens.get(pos) {
            Some(t) if !t.is_word() => (t.duration_ms(), PauseOrigin::Observed),
            _ => (0.0, PauseOrigin::None),
        };
        out.push(Syntagm::from_words(words, pause, origin));
    }
    if let Some(extra) = tokens[pos..].iter().find(|t| t.is_word()) {
        return Err(AlignmentError::Pairing {
            index: word_index,
            natural: None,
            synthetic: Some(extra.text.clone()),
        });
    }
    Ok(out)
}
