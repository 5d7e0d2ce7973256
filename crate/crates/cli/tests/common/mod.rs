//! Synthetic corpora: words rendered as constant-f0 sines, pauses as silence,
//! with matching long-format TextGrids.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const RATE: u32 = 16_000;

pub const VOCAB: &[&str] = &[
    "maison", "soleil", "jardin", "rivière", "montagne", "lumière", "chemin", "voyage", "forêt",
    "nuage", "étoile", "matin", "village", "fenêtre", "oiseau", "musique", "histoire", "pierre",
];

#[derive(Debug, Clone)]
pub struct SyntagmSpec {
    /// Word labels with synthetic durations in ms.
    pub words: Vec<(String, u32)>,
    /// Pause after the syntagm on each track; 0 for none.
    pub nat_pause_ms: u32,
    pub syn_pause_ms: u32,
}

impl SyntagmSpec {
    pub fn sentence_final(&self) -> bool {
        self.words.last().is_some_and(|w| w.0.ends_with('.'))
    }
}

/// How the natural track departs from the synthetic one.
#[derive(Debug, Clone, Copy)]
pub struct Perturbation {
    pub pitch_ratio: f64,
    pub gain_db: f64,
    pub duration_scale: f64,
}

impl Perturbation {
    pub const NONE: Perturbation = Perturbation {
        pitch_ratio: 1.0,
        gain_db: 0.0,
        duration_scale: 1.0,
    };
}

pub struct Track {
    pub samples: Vec<f32>,
    /// (start_ms, end_ms, label); empty label for silence.
    pub intervals: Vec<(u32, u32, String)>,
}

const LEAD_MS: u32 = 300;

/// Renders one track. `natural` selects the pause column and duration scale.
pub fn render(syntagms: &[SyntagmSpec], f0: f64, amplitude: f64, duration_scale: f64, natural: bool) -> Track {
    let mut samples = vec![0f32; (LEAD_MS * RATE / 1000) as usize];
    let mut intervals = vec![(0, LEAD_MS, String::new())];
    let mut t = LEAD_MS;
    let mut phase = 0.0f64;
    for s in syntagms {
        for (label, ms) in &s.words {
            let d = (*ms as f64 * duration_scale).round() as u32;
            let n = (d * RATE / 1000) as usize;
            for _ in 0..n {
                samples.push((amplitude * phase.sin()) as f32);
                phase += 2.0 * PI * f0 / RATE as f64;
            }
            intervals.push((t, t + d, label.clone()));
            t += d;
        }
        let pause = if natural { s.nat_pause_ms } else { s.syn_pause_ms };
        if pause > 0 {
            samples.extend(std::iter::repeat_n(0f32, (pause * RATE / 1000) as usize));
            intervals.push((t, t + pause, String::new()));
            t += pause;
        }
    }
    Track { samples, intervals }
}

/// Scales so the largest magnitude is exactly 1.
pub fn to_unit_peak(samples: &mut [f32]) {
    let peak = samples.iter().fold(0f32, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        for s in samples.iter_mut() {
            *s /= peak;
        }
    }
}

pub fn write_wav(path: &Path, samples: &[f32]) {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: RATE,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for &s in samples {
        w.write_sample(s).unwrap();
    }
    w.finalize().unwrap();
}

pub fn textgrid(intervals: &[(u32, u32, String)]) -> String {
    let end = intervals.last().map_or(0, |i| i.1) as f64 / 1000.0;
    let mut out = format!(
        "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\nxmin = 0\nxmax = {end}\ntiers? <exists>\nsize = 1\nitem []:\n    item [1]:\n        class = \"IntervalTier\"\n        name = \"words\"\n        xmin = 0\n        xmax = {end}\n        intervals: size = {}\n",
        intervals.len()
    );
    for (i, (s, e, label)) in intervals.iter().enumerate() {
        write!(
            out,
            "        intervals [{}]:\n            xmin = {}\n            xmax = {}\n            text = \"{}\"\n",
            i + 1,
            *s as f64 / 1000.0,
            *e as f64 / 1000.0,
            label.replace('"', "\"\"")
        )
        .unwrap();
    }
    out
}

pub struct PairPaths {
    pub natural_wav: PathBuf,
    pub synthetic_wav: PathBuf,
    pub textgrid_nat: PathBuf,
    pub textgrid_syn: PathBuf,
    pub output_dir: String,
    pub synthetic_ms: u32,
}

/// Writes the four inputs of one pair under `dir/name`. The natural track is
/// normalized to unit peak; the synthetic one sits `gain_db` below it.
pub fn write_pair(
    dir: &Path,
    name: &str,
    syntagms: &[SyntagmSpec],
    syn_f0: f64,
    p: Perturbation,
) -> PairPaths {
    let base = dir.join(name);
    fs::create_dir_all(&base).unwrap();
    let syn_amp = 10f64.powf(-p.gain_db / 20.0);
    let syn = render(syntagms, syn_f0, syn_amp, 1.0, false);
    let mut nat = render(syntagms, syn_f0 * p.pitch_ratio, 1.0, p.duration_scale, true);
    to_unit_peak(&mut nat.samples);
    let mut syn_samples = syn.samples;
    // keep the synthetic peak exactly gain_db below the natural one
    let syn_peak = syn_samples.iter().fold(0f32, |m, s| m.max(s.abs()));
    for s in syn_samples.iter_mut() {
        *s = (*s as f64 / syn_peak as f64 * syn_amp) as f32;
    }
    let paths = PairPaths {
        natural_wav: base.join("natural.wav"),
        synthetic_wav: base.join("synthetic.wav"),
        textgrid_nat: base.join("natural.TextGrid"),
        textgrid_syn: base.join("synthetic.TextGrid"),
        output_dir: format!("out/{name}"),
        synthetic_ms: syn.intervals.last().map_or(0, |i| i.1),
    };
    write_wav(&paths.natural_wav, &nat.samples);
    write_wav(&paths.synthetic_wav, &syn_samples);
    fs::write(&paths.textgrid_nat, textgrid(&nat.intervals)).unwrap();
    fs::write(&paths.textgrid_syn, textgrid(&syn.intervals)).unwrap();
    paths
}

pub fn manifest(pairs: &[PairPaths], config: &str) -> String {
    let mut out = format!("[config]\n{config}\n");
    for p in pairs {
        write!(
            out,
            "\n[[pair]]\nnatural_wav = {:?}\nsynthetic_wav = {:?}\ntextgrid_nat = {:?}\ntextgrid_syn = {:?}\noutput_dir = {:?}\n",
            p.natural_wav.display().to_string(),
            p.synthetic_wav.display().to_string(),
            p.textgrid_nat.display().to_string(),
            p.textgrid_syn.display().to_string(),
            p.output_dir,
        )
        .unwrap();
    }
    out
}

/// Deterministic syntagm list: `count` syntagms of 2 to 4 words, every third
/// ending a sentence, the last always ending one.
pub fn syntagm_plan(count: usize, seed: u64, pauses: &[u32]) -> Vec<SyntagmSpec> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move |m: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % m) as usize
    };
    (0..count)
        .map(|i| {
            let n = 2 + next(3);
            let final_word = i % 3 == 2 || i + 1 == count;
            let words = (0..n)
                .map(|k| {
                    let mut w = VOCAB[next(VOCAB.len() as u64)].to_string();
                    if k + 1 == n && final_word {
                        w.push('.');
                    }
                    (w, 300 + 20 * next(6) as u32)
                })
                .collect();
            let last = i + 1 == count;
            SyntagmSpec {
                words,
                nat_pause_ms: if last { 0 } else { pauses[next(pauses.len() as u64)] },
                syn_pause_ms: if last { 0 } else { 350 },
            }
        })
        .collect()
}

/// Break the pipeline should report for a syntagm of the natural track.
pub fn expected_break(s: &SyntagmSpec, last: bool) -> f64 {
    match (s.sentence_final(), last) {
        (true, true) => 500.0,
        (false, true) => 0.0,
        (true, false) => (s.nat_pause_ms as f64).max(500.0),
        (false, false) => s.nat_pause_ms as f64,
    }
}

pub fn syntagm_text(s: &SyntagmSpec) -> String {
    s.words.iter().map(|w| w.0.as_str()).collect::<Vec<_>>().join(" ")
}

/// `count` syntagms of three 320 ms words and 400 ms pauses, so every
/// syntagm measures the same.
pub fn uniform_plan(count: usize) -> Vec<SyntagmSpec> {
    (0..count)
        .map(|i| {
            let last = i + 1 == count;
            let words = (0..3)
                .map(|k| {
                    let mut w = VOCAB[(3 * i + k) % VOCAB.len()].to_string();
                    if last && k == 2 {
                        w.push('.');
                    }
                    (w, 320)
                })
                .collect();
            let pause = if last { 0 } else { 400 };
            SyntagmSpec { words, nat_pause_ms: pause, syn_pause_ms: pause }
        })
        .collect()
}
