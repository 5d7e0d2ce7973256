use std::fs;
use std::path::{Path, PathBuf};

use prosodika::dsp::{PitchConfig, SilenceConfig};
use prosodika::eval::ArrConfig;
use prosodika::PipelineConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Keys routed to [`PipelineConfig`]; everything else belongs to [`RunOptions`].
pub const PIPELINE_KEYS: &[&str] = &[
    "pitch_clip_st",
    "volume_clip_pct",
    "rate_clip_pct",
    "alpha",
    "max_jump_pct",
    "window_w",
    "slowdown_gain",
    "speedup_gain",
    "long_syntagm_s",
    "clamp_before_smoothing",
];

/// Settings of the surrounding pipeline stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    pub azure_silence_wrap: bool,
    pub suppress_neutral: bool,
    /// Peak-normalize the natural recording before measuring it.
    pub normalize_natural: bool,
    /// Peak-normalize the synthetic rendering too. Off by default because it
    /// would erase the loudness offset the volume delta measures.
    pub normalize_synthetic: bool,
    pub filter_function_words: bool,
    pub min_final_pause_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<String>,
    pub lang: String,
    pub voice: String,
    pub tau_ms: f64,
    pub window_s: f64,
    pub silence_threshold_dbfs: f64,
    pub min_gap_ms: u64,
    pub pitch_fmin_hz: f64,
    pub pitch_fmax_hz: f64,
    pub voicing_threshold: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        let pitch = PitchConfig::default();
        let silence = SilenceConfig::default();
        let arr = ArrConfig::default();
        RunOptions {
            azure_silence_wrap: false,
            suppress_neutral: false,
            normalize_natural: true,
            normalize_synthetic: false,
            filter_function_words: true,
            min_final_pause_ms: 500.0,
            lexicon: None,
            tier: None,
            lang: prosodika::ssml::DEFAULT_LANG.to_string(),
            voice: prosodika::ssml::DEFAULT_VOICE.to_string(),
            tau_ms: arr.tau_ms,
            window_s: arr.window_s,
            silence_threshold_dbfs: silence.threshold_dbfs,
            min_gap_ms: silence.min_gap_ms,
            pitch_fmin_hz: pitch.fmin,
            pitch_fmax_hz: pitch.fmax,
            voicing_threshold: pitch.threshold,
        }
    }
}

/// Command-line values that win over every file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lexicon: Option<PathBuf>,
    pub tau_ms: Option<f64>,
    pub window_s: Option<f64>,
    pub azure_silence_wrap: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EffectiveConfig {
    pub pipeline: PipelineConfig,
    pub options: RunOptions,
}

fn to_table<T: Serialize>(v: &T) -> toml::Table {
    toml::Table::try_from(v).expect("config structs serialize to a table")
}

impl EffectiveConfig {
    /// Defaults, then the config file if one is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg = EffectiveConfig::default();
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let table: toml::Table = toml::from_str(&text)
                .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.merge(&table, base, &path.display().to_string())?;
        }
        Ok(cfg)
    }

    /// Overlays `table`. Relative paths in it resolve against `base`.
    pub fn merge(&mut self, table: &toml::Table, base: &Path, source: &str) -> Result<(), CliError> {
        let mut pipeline = to_table(&self.pipeline);
        let mut options = to_table(&self.options);
        for (k, v) in table {
            if PIPELINE_KEYS.contains(&k.as_str()) {
                pipeline.insert(k.clone(), v.clone());
            } else {
                options.insert(k.clone(), v.clone());
            }
        }
        let bad = |e: toml::de::Error| CliError::Format(format!("{source}: {}", e.message()));
        let pipeline: PipelineConfig = pipeline.try_into().map_err(bad)?;
        let mut options: RunOptions = options.try_into().map_err(bad)?;
        if table.contains_key("lexicon") {
            options.lexicon = options.lexicon.map(|p| if p.is_relative() { base.join(p) } else { p });
        }
        self.pipeline = pipeline;
        self.options = options;
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(l) = &o.lexicon {
            self.options.lexicon = Some(l.clone());
        }
        if let Some(t) = o.tau_ms {
            self.options.tau_ms = t;
        }
        if let Some(w) = o.window_s {
            self.options.window_s = w;
        }
        if o.azure_silence_wrap {
            self.options.azure_silence_wrap = true;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.pipeline.validate()?;
        let o = &self.options;
        let problem = if !(o.tau_ms >= 0.0) {
            Some("tau_ms must be >= 0")
        } else if !(o.window_s > 0.0) {
            Some("window_s must be > 0")
        } else if !(o.pitch_fmin_hz > 0.0 && o.pitch_fmin_hz < o.pitch_fmax_hz) {
            Some("need 0 < pitch_fmin_hz < pitch_fmax_hz")
        } else if !(o.min_final_pause_ms >= 0.0) {
            Some("min_final_pause_ms must be >= 0")
        } else {
            None
        };
        match problem {
            Some(p) => Err(CliError::Format(format!("invalid configuration: {p}"))),
            None => Ok(()),
        }
    }

    /// Flat key/value echo, keys sorted.
    pub fn to_toml(&self) -> String {
        let mut t = to_table(&self.pipeline);
        t.extend(to_table(&self.options));
        toml::to_string(&t).expect("table serializes")
    }

    pub fn pitch(&self) -> PitchConfig {
        PitchConfig {
            fmin: self.options.pitch_fmin_hz,
            fmax: self.options.pitch_fmax_hz,
            threshold: self.options.voicing_threshold,
            ..Default::default()
        }
    }

    pub fn silence(&self) -> SilenceConfig {
        SilenceConfig {
            threshold_dbfs: self.options.silence_threshold_dbfs,
            min_gap_ms: self.options.min_gap_ms,
            ..Default::default()
        }
    }

    pub fn arr(&self) -> ArrConfig {
        ArrConfig {
            tau_ms: self.options.tau_ms,
            window_s: self.options.window_s,
        }
    }
}
