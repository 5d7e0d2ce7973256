use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prosodika::eval::{histogram_csv, Pooling};
use prosodika_cli::{
    cmd_annotate, cmd_census, cmd_score, cmd_segment, cmd_stats, cmd_validate, segments_csv, write_atomic,
    CliError, EffectiveConfig, Overrides, ScoreInputs,
};

/// Exit status for command-line usage errors, kept apart from the data codes.
const USAGE_EXIT: u8 = 64;

#[derive(Parser)]
#[command(name = "prosodika", version, about = "Prosody-to-SSML annotation and scoring")]
struct Cli {
    /// Flat TOML file of configuration keys.
    #[arg(long, global = true, env = "PROSODIKA_CONFIG")]
    config: Option<PathBuf>,
    /// Function-word list, one word per line.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Alignment tolerance for ARR, in milliseconds.
    #[arg(long, global = true)]
    tau_ms: Option<f64>,
    /// ARR window length, in seconds.
    #[arg(long, global = true)]
    window_s: Option<f64>,
    /// Bracket prosody elements with zero-length mstts:silence directives.
    #[arg(long, global = true)]
    azure_silence_wrap: bool,
    /// Worker threads; defaults to the number of processors.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect speech runs in a WAV file and write start_ms,end_ms rows.
    Segment {
        audio: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute deltas and SSML for every pair of a job manifest.
    Annotate { manifest: PathBuf },
    /// Score predicted SSML against gold.
    Score {
        pred: PathBuf,
        gold: PathBuf,
        #[arg(long)]
        pred_breaks: Option<PathBuf>,
        #[arg(long)]
        gold_breaks: Option<PathBuf>,
        #[arg(long)]
        pred_alignment: Option<PathBuf>,
        #[arg(long)]
        gold_alignment: Option<PathBuf>,
        /// Average errors per segment instead of pooling all syntagms.
        #[arg(long = "macro")]
        macro_average: bool,
        /// Also write the report as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Summarise delta record files.
    Stats {
        #[arg(required = true)]
        records: Vec<PathBuf>,
        #[arg(long)]
        exclude_injected: bool,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Write histogram bins as CSV.
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count prosody and break tags per segment.
    Census {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        gold: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check SSML files against the structural rules and clip ranges.
    ValidateSsml {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let overrides = Overrides {
        lexicon: cli.lexicon,
        tau_ms: cli.tau_ms,
        window_s: cli.window_s,
        azure_silence_wrap: cli.azure_silence_wrap,
    };
    let base = EffectiveConfig::load(cli.config.as_deref())?;
    let mut cfg = base.clone();
    cfg.apply(&overrides);
    cfg.validate()?;

    match cli.command {
        Command::Segment { audio, output } => {
            let csv = segments_csv(&cmd_segment(&audio, &cfg)?);
            match output {
                Some(p) => write_atomic(&p, csv.as_bytes())?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::Annotate { manifest } => {
            let report = cmd_annotate(&manifest, &base, &overrides, cli.jobs)?;
            for p in &report.pairs {
                match &p.result {
                    Ok(a) => println!("{}: {} syntagms", p.output_dir.display(), a.len()),
                    Err(e) => eprintln!("{}: error: {e}", p.output_dir.display()),
                }
            }
            Ok(report.exit_code())
        }
        Command::Score {
            pred,
            gold,
            pred_breaks,
            gold_breaks,
            pred_alignment,
            gold_alignment,
            macro_average,
            output,
        } => {
            let inputs = ScoreInputs {
                pred,
                gold,
                pred_breaks,
                gold_breaks,
                pred_alignment,
                gold_alignment,
                pooling: if macro_average { Pooling::Macro } else { Pooling::Micro },
            };
            let report = cmd_score(&inputs, &cfg)?;
            print!("{}", report.to_table());
            if let Some(p) = output {
                write_atomic(&p, json(&report).as_bytes())?;
            }
            Ok(0)
        }
        Command::Stats {
            records,
            exclude_injected,
            bins,
            histogram,
            output,
        } => {
            let report = cmd_stats(&records, exclude_injected, bins)?;
            print!("{}", report.to_table());
            if let Some(p) = histogram {
                write_atomic(&p, histogram_csv(&report.distributions).as_bytes())?;
            }
            if let Some(p) = output {
                write_atomic(&p, json(&report).as_bytes())?;
            }
            Ok(0)
        }
        Command::Census { inputs, gold, output } => {
            let report = cmd_census(&inputs, &gold)?;
            print!("{}", report.to_table());
            if let Some(p) = output {
                write_atomic(&p, json(&report).as_bytes())?;
            }
            Ok(0)
        }
        Command::ValidateSsml { inputs } => {
            let report = cmd_validate(&inputs, &cfg)?;
            print!("{}", report.to_text());
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("prosodika: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
