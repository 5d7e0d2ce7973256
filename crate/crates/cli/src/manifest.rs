use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    config: toml::Table,
    #[serde(default, rename = "pair")]
    pairs: Vec<PairSpec>,
}

/// One natural/synthetic pair. Paths are as written in the manifest.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub natural_wav: PathBuf,
    pub synthetic_wav: PathBuf,
    pub textgrid_nat: PathBuf,
    pub textgrid_syn: PathBuf,
    pub output_dir: PathBuf,
    /// Word tier of both TextGrids; the first interval tier when absent.
    pub tier: Option<String>,
    pub speaker: Option<String>,
}

impl PairSpec {
    pub fn inputs(&self) -> [&Path; 4] {
        [&self.natural_wav, &self.synthetic_wav, &self.textgrid_nat, &self.textgrid_syn]
    }
}

#[derive(Debug, Clone)]
pub struct JobManifest {
    /// Directory relative paths resolve against.
    pub base_dir: PathBuf,
    pub config: toml::Table,
    pub pairs: Vec<PairSpec>,
}

impl JobManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")), &path.display().to_string())
    }

    pub fn parse(text: &str, base_dir: &Path, source: &str) -> Result<Self, CliError> {
        let raw: RawManifest =
            toml::from_str(text).map_err(|e| CliError::Format(format!("{source}: {}", e.message())))?;
        if raw.pairs.is_empty() {
            return Err(CliError::Empty(format!("{source}: manifest lists no [[pair]]")));
        }
        Ok(JobManifest {
            base_dir: base_dir.to_path_buf(),
            config: raw.config,
            pairs: raw.pairs,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Every input must exist before any work starts.
    pub fn check_inputs(&self) -> Result<(), CliError> {
        let missing: Vec<String> = self
            .pairs
            .iter()
            .flat_map(PairSpec::inputs)
            .map(|p| self.resolve(p))
            .filter(|p| !p.is_file())
            .map(|p| p.display().to_string())
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(CliError::Io {
                path: missing.join(", "),
                message: "input file not found".into(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"
[config]
alpha = 0.3

[[pair]]
natural_wav = "a/nat.wav"
synthetic_wav = "/abs/syn.wav"
textgrid_nat = "a/nat.TextGrid"
textgrid_syn = "a/syn.TextGrid"
output_dir = "out/1"
speaker = "spk"
"#;

    #[test]
    fn parses_and_resolves() {
        let m = JobManifest::parse(ONE, Path::new("/job"), "m.toml").unwrap();
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.config["alpha"].as_float(), Some(0.3));
        assert_eq!(m.resolve(&m.pairs[0].natural_wav), PathBuf::from("/job/a/nat.wav"));
        assert_eq!(m.resolve(&m.pairs[0].synthetic_wav), PathBuf::from("/abs/syn.wav"));
    }

    #[test]
    fn empty_and_bad_manifests() {
        assert_eq!(JobManifest::parse("", Path::new("."), "m").unwrap_err().exit_code(), 5);
        let bad = ONE.replace("speaker", "speeker");
        assert_eq!(JobManifest::parse(&bad, Path::new("."), "m").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn missing_inputs_are_io_errors() {
        let m = JobManifest::parse(ONE, Path::new("/nonexistent"), "m").unwrap();
        let err = m.check_inputs().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("nat.wav"));
    }
}
