//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error (including usage
//! errors), 2 internal error. Diagnostics go to standard error; data goes to
//! standard output or the named files.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::pipeline::{PipelineConfig, CONFIG_ENV};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "thermoscreen", version, about = "Thermal fever and mask screening toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize radiometric frames to 8-bit images.
    Normalize(NormalizeArgs),
    /// Convert color images into thermal-looking grayscale training data.
    Augment(AugmentArgs),
    /// Run the configured face detector and print wire-format detections.
    Detect(FramesArgs),
    /// Detect and screen frames, printing one event per frame.
    Screen(FramesArgs),
    /// Score detections (and optional screening verdicts) against ground truth.
    Evaluate(EvaluateArgs),
    /// Generate a seeded synthetic dataset.
    Synth(SynthArgs),
    /// Run the full pipeline over a dataset directory.
    Stream(StreamArgs),
    /// Chronological 70/20/10 split of a manifest.
    Split(SplitArgs),
}

/// One flag per configuration key; precedence is flag > file > default.
#[derive(Debug, Default, Args)]
struct ConfigArgs {
    /// Configuration file [default: $THERMOSCREEN_CONFIG]
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "C")]
    lower_clamp: Option<String>,
    #[arg(long, value_name = "C")]
    upper_clamp: Option<String>,
    /// band_clamp or literal
    #[arg(long, value_name = "MODE")]
    normalization_mode: Option<String>,
    /// baseline, command:<cmdline> or file:<path>
    #[arg(long, value_name = "SPEC")]
    detector: Option<String>,
    #[arg(long, value_name = "C")]
    body_band_min: Option<String>,
    #[arg(long, value_name = "C")]
    body_band_max: Option<String>,
    #[arg(long, value_name = "PIXELS")]
    min_area: Option<String>,
    #[arg(long, value_name = "RATIO")]
    aspect_min: Option<String>,
    #[arg(long, value_name = "RATIO")]
    aspect_max: Option<String>,
    #[arg(long, value_name = "PIXELS")]
    merge_gap: Option<String>,
    #[arg(long, value_name = "C")]
    fever_threshold: Option<String>,
    #[arg(long, value_name = "C")]
    mask_delta_threshold: Option<String>,
    #[arg(long, value_name = "FRACTION")]
    upper_face_fraction: Option<String>,
    #[arg(long, value_name = "FRACTION")]
    lower_face_fraction: Option<String>,
    /// External mask verdicts replacing the heuristic
    #[arg(long, value_name = "PATH")]
    mask_file: Option<String>,
    #[arg(long, value_name = "C")]
    fallback_band_min: Option<String>,
    #[arg(long, value_name = "C")]
    fallback_band_max: Option<String>,
    #[arg(long, value_name = "FPS")]
    target_fps: Option<String>,
    /// Worker threads, 0 for one per core
    #[arg(long, value_name = "N")]
    workers: Option<String>,
    /// Record per-frame latency in events
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    record_latency: Option<String>,
    #[arg(long, alias = "events", value_name = "PATH")]
    events_path: Option<String>,
    #[arg(long, alias = "summary", value_name = "PATH")]
    summary_path: Option<String>,
}

impl ConfigArgs {
    fn overrides(&self) -> [(&'static str, &Option<String>); 22] {
        [
            ("lower_clamp", &self.lower_clamp),
            ("upper_clamp", &self.upper_clamp),
            ("normalization_mode", &self.normalization_mode),
            ("detector", &self.detector),
            ("body_band_min", &self.body_band_min),
            ("body_band_max", &self.body_band_max),
            ("min_area", &self.min_area),
            ("aspect_min", &self.aspect_min),
            ("aspect_max", &self.aspect_max),
            ("merge_gap", &self.merge_gap),
            ("fever_threshold", &self.fever_threshold),
            ("mask_delta_threshold", &self.mask_delta_threshold),
            ("upper_face_fraction", &self.upper_face_fraction),
            ("lower_face_fraction", &self.lower_face_fraction),
            ("mask_file", &self.mask_file),
            ("fallback_band_min", &self.fallback_band_min),
            ("fallback_band_max", &self.fallback_band_max),
            ("target_fps", &self.target_fps),
            ("workers", &self.workers),
            ("record_latency", &self.record_latency),
            ("events_path", &self.events_path),
            ("summary_path", &self.summary_path),
        ]
    }

    /// Default, then the configuration file, then flags.
    fn resolve(&self) -> Result<PipelineConfig> {
        let file = self.config.clone().or_else(|| {
            std::env::var_os(CONFIG_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        });
        let mut cfg = match file {
            Some(path) => PipelineConfig::from_file(&path)?,
            None => PipelineConfig::default(),
        };
        for (key, value) in self.overrides() {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct NormalizeArgs {
    /// Frame (image with sidecar, or `.temps`) or dataset directory
    #[arg(long)]
    input: PathBuf,
    /// Output image, or output directory for a dataset
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    /// Directory of 8-bit color images
    #[arg(long)]
    input: PathBuf,
    /// Annotation file [default: ground truth file inside --input]
    #[arg(long)]
    annotations: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    gamma_min: f64,
    #[arg(long, default_value_t = 0.9)]
    gamma_max: f64,
    /// published or bt601
    #[arg(long, default_value = "published")]
    coefficients: String,
    /// Write per-face crops for mask-classifier training
    #[arg(long)]
    crops: bool,
    /// Add the negative of every crop (implies --crops)
    #[arg(long)]
    negatives: bool,
}

#[derive(Debug, Args)]
struct FramesArgs {
    /// Frame (image with sidecar, or `.temps`) or dataset directory
    #[arg(long)]
    input: PathBuf,
    /// Frame id for a single-frame input
    #[arg(long, default_value_t = 0)]
    frame_id: u64,
    /// Precomputed detections, shorthand for --detector file:<path>
    #[arg(long, value_name = "PATH", conflicts_with = "detector")]
    dets: Option<PathBuf>,
    /// Output file [default: standard output]
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Ground truth file
    #[arg(long)]
    gt: PathBuf,
    /// Detections in the wire format
    #[arg(long)]
    dets: PathBuf,
    /// Event log whose screening verdicts are scored for mask accuracy
    #[arg(long)]
    screening: Option<PathBuf>,
    /// Manifest mapping frame ids to images [default: manifest next to --gt]
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Add a per-illumination-bucket table
    #[arg(long)]
    by_lux: bool,
    #[arg(long, default_value_t = 0.5)]
    iou_threshold: f64,
    #[arg(long, default_value_t = 0.0)]
    score_threshold: f64,
    /// all-points or 11-point
    #[arg(long, default_value = "all-points")]
    ap_method: String,
    /// Also write the report as JSON to PATH (`-` for standard output instead of the table)
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// mixed, all-febrile, all-masked or healthy
    #[arg(long, default_value = "mixed")]
    scenario: String,
    /// Sensor noise standard deviation in °C
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
}

#[derive(Debug, Args)]
struct StreamArgs {
    /// Dataset directory with a manifest
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Directory for train.txt, val.txt and test.txt [default: print to standard output]
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                1
            } else {
                2
            }
        }
        Err(_) => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Normalize(a) => commands::normalize(&a.input, &a.out, &a.config.resolve()?),
        Command::Augment(a) => commands::augment(&a),
        Command::Detect(a) => commands::detect(&a, &frames_config(&a)?),
        Command::Screen(a) => commands::screen(&a, &frames_config(&a)?),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::Stream(a) => commands::stream(&a.data, &a.config.resolve()?),
        Command::Split(a) => commands::split(&a.manifest, a.out.as_deref()),
    }
}

fn frames_config(a: &FramesArgs) -> Result<PipelineConfig> {
    let mut cfg = a.config.resolve()?;
    if let Some(path) = &a.dets {
        cfg.set("detector", &format!("file:{}", path.display()))?;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}
