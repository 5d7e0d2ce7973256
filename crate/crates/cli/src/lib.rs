//! Library side of the `prosodika` command line tool. Each subcommand is a
//! `cmd_*` function returning a report, so the binary only parses flags and
//! prints.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use commands::annotate::{cmd_annotate, AnnotateReport, PairOutcome};
pub use commands::census::{cmd_census, CensusReport};
pub use commands::score::{cmd_score, ScoreInputs};
pub use commands::segment::{cmd_segment, segments_csv};
pub use commands::stats::{cmd_stats, StatsReport, StatsTotals};
pub use commands::validate::{cmd_validate, ValidationReport};
pub use config::{EffectiveConfig, Overrides, RunOptions};
pub use error::CliError;
pub use manifest::{JobManifest, PairSpec};

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(contents).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Expands directories to their `*.ssml` files, sorted by name.
pub fn ssml_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found = Vec::new();
            collect_ssml(p, &mut found)?;
            found.sort();
            out.extend(found);
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            return Err(CliError::Io {
                path: p.display().to_string(),
                message: "no such file or directory".into(),
            });
        }
    }
    Ok(out)
}

fn collect_ssml(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), CliError> {
    for entry in fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.is_dir() {
            collect_ssml(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "ssml") {
            out.push(path);
        }
    }
    Ok(())
}

pub fn read_ssml(path: &Path) -> Result<prosodika::SsmlDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    prosodika::ssml::parse(&text).map_err(|e| CliError::from(e).context(path.display()))
}
