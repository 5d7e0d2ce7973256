use std::fmt::Write;
use std::path::{Path, PathBuf};

use prosodika::alignment::{
    filter_function_word_pauses, project_syntagms, read_textgrid, segment_syntagms, select_tier,
    tokens_from_tier, FunctionWordLexicon, SegmentationConfig, Syntagm, Token,
};
use prosodika::dsp::{estimate_f0_track, load_wav, peak_normalize, resample_to_16k, LoudnessMeter};
use prosodika::prosody::{annotate_corpus, measure_syntagms};
use prosodika::records::{write_jsonl, DeltaRecord};
use prosodika::ssml::{emit_syntagms, EmitOptions};
use prosodika::{Annotation, AudioBuffer, SyntagmFeatures};
use rayon::prelude::*;

use crate::{write_atomic, CliError, EffectiveConfig, JobManifest, Overrides, PairSpec};

pub const DELTAS_FILE: &str = "deltas.jsonl";
pub const SSML_FILE: &str = "segment.ssml";
pub const LOG_FILE: &str = "run.log";

#[derive(Debug)]
pub struct PairOutcome {
    pub output_dir: PathBuf,
    pub result: Result<Vec<Annotation>, CliError>,
}

#[derive(Debug)]
pub struct AnnotateReport {
    pub pairs: Vec<PairOutcome>,
}

impl AnnotateReport {
    /// Worst exit code over the pairs.
    pub fn exit_code(&self) -> i32 {
        self.pairs
            .iter()
            .filter_map(|p| p.result.as_ref().err())
            .map(CliError::exit_code)
            .max()
            .unwrap_or(0)
    }
}

/// Annotates every pair of the manifest. Pair failures are recorded in the
/// report; only job-level problems (manifest, configuration, missing inputs)
/// return an error.
pub fn cmd_annotate(
    manifest_path: &Path,
    base: &EffectiveConfig,
    overrides: &Overrides,
    jobs: Option<usize>,
) -> Result<AnnotateReport, CliError> {
    let manifest = JobManifest::load(manifest_path)?;
    let mut cfg = base.clone();
    cfg.merge(&manifest.config, &manifest.base_dir, &format!("{} [config]", manifest_path.display()))?;
    cfg.apply(overrides);
    cfg.validate()?;
    manifest.check_inputs()?;
    let lexicon = match &cfg.options.lexicon {
        Some(p) => FunctionWordLexicon::from_path(p).map_err(|e| CliError::io(p, e))?,
        None => FunctionWordLexicon::french(),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Format(format!("cannot start worker pool: {e}")))?;
    let pairs = pool.install(|| {
        manifest
            .pairs
            .par_iter()
            .map(|spec| run_pair(&manifest, spec, &cfg, &lexicon))
            .collect()
    });
    Ok(AnnotateReport { pairs })
}

fn run_pair(manifest: &JobManifest, spec: &PairSpec, cfg: &EffectiveConfig, lexicon: &FunctionWordLexicon) -> PairOutcome {
    let output_dir = manifest.resolve(&spec.output_dir);
    let computed = annotate_pair(manifest, spec, cfg, lexicon);
    let mut log = run_log_header(spec, cfg);
    let result = computed.and_then(|(annotations, ssml)| {
        let records: Vec<DeltaRecord> = annotations
            .iter()
            .map(|a| DeltaRecord {
                speaker: spec.speaker.clone(),
                annotation: a.clone(),
            })
            .collect();
        let mut jsonl = Vec::new();
        write_jsonl(&mut jsonl, &records).map_err(|e| CliError::io(&output_dir, e))?;
        write_atomic(&output_dir.join(DELTAS_FILE), &jsonl)?;
        write_atomic(&output_dir.join(SSML_FILE), ssml.as_bytes())?;
        Ok(annotations)
    });
    match &result {
        Ok(a) => {
            let count = |f: fn(&Annotation) -> bool| a.iter().filter(|x| f(x)).count();
            writeln!(
                log,
                "result = ok\nsyntagms = {}\nno_pitch = {}\nno_volume = {}\nno_rate = {}\npause_injected = {}",
                a.len(),
                count(|x| x.flags.no_pitch),
                count(|x| x.flags.no_volume),
                count(|x| x.flags.no_rate),
                count(|x| x.flags.pause_injected),
            )
            .unwrap();
        }
        Err(e) => {
            writeln!(log, "result = error\nexit_code = {}\nerror = {:?}", e.exit_code(), e.to_string()).unwrap();
        }
    }
    // a failed log write must not hide the pair's own outcome
    let log_result = write_atomic(&output_dir.join(LOG_FILE), log.as_bytes());
    PairOutcome {
        output_dir,
        result: result.and_then(|a| log_result.map(|_| a)),
    }
}

fn run_log_header(spec: &PairSpec, cfg: &EffectiveConfig) -> String {
    let mut log = String::from("# prosodika annotate\n");
    for (k, p) in [
        ("natural_wav", &spec.natural_wav),
        ("synthetic_wav", &spec.synthetic_wav),
        ("textgrid_nat", &spec.textgrid_nat),
        ("textgrid_syn", &spec.textgrid_syn),
        ("output_dir", &spec.output_dir),
    ] {
        writeln!(log, "{k} = {:?}", p.display().to_string()).unwrap();
    }
    if let Some(s) = &spec.speaker {
        writeln!(log, "speaker = {s:?}").unwrap();
    }
    log.push_str("\n[config]\n");
    log.push_str(&cfg.to_toml());
    log.push_str("\n[outcome]\n");
    log
}

fn load_track(path: &Path, normalize: bool) -> Result<AudioBuffer, CliError> {
    let audio = resample_to_16k(&load_wav(path)?)?;
    Ok(if normalize { peak_normalize(&audio) } else { audio })
}

pub(crate) fn load_tokens(path: &Path, tier: Option<&str>) -> Result<Vec<Token>, CliError> {
    let tiers = read_textgrid(path).map_err(|e| CliError::from(e).context(path.display()))?;
    let tier = select_tier(&tiers, tier).map_err(|e| CliError::from(e).context(path.display()))?;
    Ok(tokens_from_tier(tier))
}

fn features(audio: &AudioBuffer, syntagms: &[Syntagm], cfg: &EffectiveConfig) -> Result<Vec<SyntagmFeatures>, CliError> {
    let track = estimate_f0_track(audio, &cfg.pitch())?;
    let meter = LoudnessMeter::new(audio);
    Ok(measure_syntagms(syntagms, &track, &meter, audio.duration_ms()))
}

fn annotate_pair(
    manifest: &JobManifest,
    spec: &PairSpec,
    cfg: &EffectiveConfig,
    lexicon: &FunctionWordLexicon,
) -> Result<(Vec<Annotation>, String), CliError> {
    let opts = &cfg.options;
    let tier = spec.tier.as_deref().or(opts.tier.as_deref());

    let mut nat_tokens = load_tokens(&manifest.resolve(&spec.textgrid_nat), tier)?;
    if opts.filter_function_words {
        nat_tokens = filter_function_word_pauses(&nat_tokens, lexicon);
    }
    let seg_cfg = SegmentationConfig {
        min_final_pause_ms: opts.min_final_pause_ms,
        ..Default::default()
    };
    let nat_syntagms = segment_syntagms(&nat_tokens, &seg_cfg);
    if nat_syntagms.is_empty() {
        return Err(CliError::Empty(format!("{}: no words in the natural alignment", spec.textgrid_nat.display())));
    }
    let syn_tokens = load_tokens(&manifest.resolve(&spec.textgrid_syn), tier)?;
    let syn_syntagms = project_syntagms(&nat_syntagms, &syn_tokens)?;

    let nat_audio = load_track(&manifest.resolve(&spec.natural_wav), opts.normalize_natural)?;
    let syn_audio = load_track(&manifest.resolve(&spec.synthetic_wav), opts.normalize_synthetic)?;
    let nat_features = features(&nat_audio, &nat_syntagms, cfg)?;
    let syn_features = features(&syn_audio, &syn_syntagms, cfg)?;

    let nat: Vec<_> = nat_syntagms.into_iter().zip(nat_features).collect();
    let syn: Vec<_> = syn_syntagms.into_iter().zip(syn_features).collect();
    let annotations = annotate_corpus(&nat, &syn, &cfg.pipeline)?;

    let units: Vec<_> = annotations.iter().map(|a| (a.text.clone(), a.delta)).collect();
    let emit = EmitOptions {
        azure_silence_wrap: opts.azure_silence_wrap,
        suppress_neutral: opts.suppress_neutral,
        full_document: true,
        lang: opts.lang.clone(),
        voice: opts.voice.clone(),
        bounds: cfg.pipeline.clone(),
    };
    let ssml = emit_syntagms(&units, &emit)?;
    Ok((annotations, ssml))
}
