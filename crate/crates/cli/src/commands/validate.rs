use std::path::PathBuf;

use prosodika::ssml::{validate, Violation};

use crate::{read_ssml, ssml_files, CliError, EffectiveConfig};

#[derive(Debug)]
pub struct ValidationReport {
    pub files: Vec<(PathBuf, Result<Vec<Violation>, CliError>)>,
}

impl ValidationReport {
    /// 0 when every file parses and validates clean, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        self.files
            .iter()
            .map(|(_, r)| match r {
                Ok(v) if v.is_empty() => 0,
                Ok(_) => 3,
                Err(e) => e.exit_code(),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (path, r) in &self.files {
            match r {
                Ok(v) if v.is_empty() => out.push_str(&format!("{}: ok\n", path.display())),
                Ok(v) => {
                    for violation in v {
                        out.push_str(&format!("{}: {violation}\n", path.display()));
                    }
                }
                Err(e) => out.push_str(&format!("{}: {e}\n", path.display())),
            }
        }
        out
    }
}

pub fn cmd_validate(inputs: &[PathBuf], cfg: &EffectiveConfig) -> Result<ValidationReport, CliError> {
    let files = ssml_files(inputs)?;
    if files.is_empty() {
        return Err(CliError::Empty("no SSML files given".into()));
    }
    Ok(ValidationReport {
        files: files
            .into_iter()
            .map(|f| {
                let r = read_ssml(&f).map(|doc| validate(&doc, &cfg.pipeline));
                (f, r)
            })
            .collect(),
    })
}
