use std::path::PathBuf;

use prosodika::eval::{tag_census, TagCensus};
use serde::Serialize;

use crate::{read_ssml, ssml_files, CliError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub documents: usize,
    pub predicted: TagCensus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gold: Option<TagCensus>,
}

impl CensusReport {
    pub fn to_table(&self) -> String {
        let mut out = String::from("side       segments  prosody  break  prosody/seg  break/seg  words  characters\n");
        let mut row = |side: &str, c: &TagCensus| {
            out.push_str(&format!(
                "{side:<10} {:>8} {:>8} {:>6} {:>12.2} {:>10.2} {:>6} {:>11}\n",
                c.segments, c.prosody_tags, c.break_tags, c.prosody_per_segment, c.break_per_segment, c.words, c.characters
            ))
        };
        row("input", &self.predicted);
        if let Some(g) = &self.gold {
            row("gold", g);
        }
        out
    }
}

pub fn cmd_census(inputs: &[PathBuf], gold: &[PathBuf]) -> Result<CensusReport, CliError> {
    let files = ssml_files(inputs)?;
    let docs = files.iter().map(|f| read_ssml(f)).collect::<Result<Vec<_>, _>>()?;
    let gold = if gold.is_empty() {
        None
    } else {
        let g = ssml_files(gold)?
            .iter()
            .map(|f| read_ssml(f))
            .collect::<Result<Vec<_>, _>>()?;
        Some(tag_census(&g))
    };
    Ok(CensusReport {
        documents: docs.len(),
        predicted: tag_census(&docs),
        gold,
    })
}
