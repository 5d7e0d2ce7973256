use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

const FRENCH: &str = include_str!("../../data/function_words_fr.txt");

/// Closed-class word list consulted by the pause filter.
///
/// This is a lexicon approximation of a part-of-speech filter: determiners,
/// prepositions, pronouns, conjunctions and auxiliaries. Lookups fold case and
/// accents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FunctionWordLexicon {
    entries: HashSet<String>,
}

impl FunctionWordLexicon {
    /// The built-in French list.
    pub fn french() -> Self {
        Self::from_lines(FRENCH.lines())
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn from_lines<'a>(lines: impl IntoIterator<Item = &'a str>) -> Self {
        let entries = lines
            .into_iter()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(fold_word)
            .filter(|w| !w.is_empty())
            .collect();
        FunctionWordLexicon { entries }
    }

    pub fn from_path(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let file = std::fs::File::open(path)?;
        let lines = std::io::BufReader::new(file)
            .lines()
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_lines(lines.iter().map(String::as_str)))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&fold_word(word))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Lowercases, strips accents, unifies apostrophes and trims surrounding
/// punctuation (a trailing elision apostrophe is kept: `l'`, `qu'`).
pub fn fold_word(word: &str) -> String {
    let folded: String = word
        .nfd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .map(|c| if matches!(c, '’' | 'ʼ' | '`') { '\'' } else { c })
        .collect();
    let trimmed = folded.trim_start_matches(|c: char| !c.is_alphanumeric());
    let elided = trimmed.ends_with('\'');
    let core = trimmed.trim_end_matches(|c: char| !c.is_alphanumeric());
    if elided && !core.is_empty() {
        format!("{core}'")
    } else {
        core.to_string()
    }
}
