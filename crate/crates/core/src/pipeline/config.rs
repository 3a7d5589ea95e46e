//! Pipeline configuration.
//!
//! The configuration file is flat `key = value` text; `#` starts a comment.
//! Every key can also be set from the command line, with precedence
//! flag > file > built-in default.

use std::path::{Path, PathBuf};

use crate::data::LoadOptions;
use crate::detect::{BaselineDetectorConfig, TempBand};
use crate::radiometric::NormalizationConfig;
use crate::screen::ScreeningConfig;
use crate::{Error, Result};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "THERMOSCREEN_CONFIG";

/// Nominal camera capture rate, frames per second.
pub const DEFAULT_TARGET_FPS: f64 = 9.0;

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorChoice {
    Baseline,
    /// Command line run per frame with the frame path appended.
    Command(String),
    /// Precomputed detections in the external wire format.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub normalization: NormalizationConfig,
    pub detector: DetectorChoice,
    pub baseline: BaselineDetectorConfig,
    pub screening: ScreeningConfig,
    /// External mask-classifier verdicts replacing the heuristic.
    pub mask_file: Option<PathBuf>,
    pub load: LoadOptions,
    pub target_fps: f64,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
    /// Include per-frame wall-clock latency in event records. Off by
    /// default so event logs are reproducible byte for byte.
    pub record_latency: bool,
    pub events_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            normalization: NormalizationConfig::default(),
            detector: DetectorChoice::Baseline,
            baseline: BaselineDetectorConfig::default(),
            screening: ScreeningConfig::default(),
            mask_file: None,
            load: LoadOptions::default(),
            target_fps: DEFAULT_TARGET_FPS,
            workers: 0,
            record_latency: false,
            events_path: None,
            summary_path: None,
        }
    }
}

/// Every recognised configuration key.
pub const CONFIG_KEYS: &[&str] = &[
    "lower_clamp",
    "upper_clamp",
    "normalization_mode",
    "detector",
    "body_band_min",
    "body_band_max",
    "min_area",
    "aspect_min",
    "aspect_max",
    "merge_gap",
    "fever_threshold",
    "mask_delta_threshold",
    "upper_face_fraction",
    "lower_face_fraction",
    "mask_file",
    "fallback_band_min",
    "fallback_band_max",
    "target_fps",
    "workers",
    "record_latency",
    "events_path",
    "summary_path",
];

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::InvalidConfig(format!(
            "{key}: expected true or false, got {value:?}"
        ))),
    }
}

impl PipelineConfig {
    /// Sets one key. Detector values are `baseline`, `command:<cmdline>` or
    /// `file:<path>`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "lower_clamp" => self.normalization.lower_clamp = num(key, value)?,
            "upper_clamp" => self.normalization.upper_clamp = num(key, value)?,
            "normalization_mode" => self.normalization.mode = value.parse()?,
            "detector" => {
                self.detector = if value == "baseline" {
                    DetectorChoice::Baseline
                } else if let Some(cmd) = value.strip_prefix("command:") {
                    DetectorChoice::Command(cmd.trim().to_string())
                } else if let Some(path) = value.strip_prefix("file:") {
                    DetectorChoice::File(PathBuf::from(path.trim()))
                } else {
                    return Err(Error::InvalidConfig(format!(
                        "detector: expected baseline, command:<cmd> or file:<path>, got {value:?}"
                    )));
                }
            }
            "body_band_min" => self.baseline.body_band.min = num(key, value)?,
            "body_band_max" => self.baseline.body_band.max = num(key, value)?,
            "min_area" => self.baseline.min_area = num(key, value)?,
            "aspect_min" => self.baseline.aspect_ratio_band.min = num(key, value)?,
            "aspect_max" => self.baseline.aspect_ratio_band.max = num(key, value)?,
            "merge_gap" => self.baseline.merge_gap = num(key, value)?,
            "fever_threshold" => self.screening.fever_threshold = num(key, value)?,
            "mask_delta_threshold" => self.screening.mask_delta_threshold = num(key, value)?,
            "upper_face_fraction" => self.screening.upper_face_fraction = num(key, value)?,
            "lower_face_fraction" => self.screening.lower_face_fraction = num(key, value)?,
            "mask_file" => self.mask_file = Some(PathBuf::from(value)),
            "fallback_band_min" => self.load.fallback_band.min = num(key, value)?,
            "fallback_band_max" => self.load.fallback_band.max = num(key, value)?,
            "target_fps" => self.target_fps = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            "record_latency" => self.record_latency = boolean(key, value)?,
            "events_path" => self.events_path = Some(PathBuf::from(value)),
            "summary_path" => self.summary_path = Some(PathBuf::from(value)),
            other => return Err(Error::InvalidConfig(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "config", format!("expected key = value, got {line:?}")))?;
            self.set(key.trim(), value)
                .map_err(|e| Error::parse(i + 1, key.trim(), e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Renders the configuration in the file format, one key per line.
    pub fn to_text(&self) -> String {
        let detector = match &self.detector {
            DetectorChoice::Baseline => "baseline".to_string(),
            DetectorChoice::Command(c) => format!("command:{c}"),
            DetectorChoice::File(p) => format!("file:{}", p.display()),
        };
        let mode = match self.normalization.mode {
            crate::radiometric::NormalizationMode::BandClamp => "band_clamp",
            crate::radiometric::NormalizationMode::Literal => "literal",
        };
        let mut lines = vec![
            format!("lower_clamp = {}", self.normalization.lower_clamp),
            format!("upper_clamp = {}", self.normalization.upper_clamp),
            format!("normalization_mode = {mode}"),
            format!("detector = {detector}"),
            format!("body_band_min = {}", self.baseline.body_band.min),
            format!("body_band_max = {}", self.baseline.body_band.max),
            format!("min_area = {}", self.baseline.min_area),
            format!("aspect_min = {}", self.baseline.aspect_ratio_band.min),
            format!("aspect_max = {}", self.baseline.aspect_ratio_band.max),
            format!("merge_gap = {}", self.baseline.merge_gap),
            format!("fever_threshold = {}", self.screening.fever_threshold),
            format!("mask_delta_threshold = {}", self.screening.mask_delta_threshold),
            format!("upper_face_fraction = {}", self.screening.upper_face_fraction),
            format!("lower_face_fraction = {}", self.screening.lower_face_fraction),
            format!("fallback_band_min = {}", self.load.fallback_band.min),
            format!("fallback_band_max = {}", self.load.fallback_band.max),
            format!("target_fps = {}", self.target_fps),
            format!("workers = {}", self.workers),
            format!("record_latency = {}", self.record_latency),
        ];
        if let Some(p) = &self.mask_file {
            lines.push(format!("mask_file = {}", p.display()));
        }
        if let Some(p) = &self.events_path {
            lines.push(format!("events_path = {}", p.display()));
        }
        if let Some(p) = &self.summary_path {
            lines.push(format!("summary_path = {}", p.display()));
        }
        lines.join("\n") + "\n"
    }

    /// Checks value ranges and that referenced input files exist and
    /// output directories are present.
    pub fn validate(&self) -> Result<()> {
        self.normalization.validate()?;
        self.baseline.validate()?;
        self.screening.validate()?;
        let fb: TempBand = self.load.fallback_band;
        if !(fb.min.is_finite() && fb.max.is_finite() && fb.min < fb.max) {
            return Err(Error::InvalidConfig("fallback band must satisfy min < max".into()));
        }
        if !(self.target_fps.is_finite() && self.target_fps > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "target_fps must be positive, got {}",
                self.target_fps
            )));
        }
        match &self.detector {
            DetectorChoice::Baseline => {}
            DetectorChoice::Command(c) if c.trim().is_empty() => {
                return Err(Error::InvalidConfig("detector command is empty".into()));
            }
            DetectorChoice::Command(_) => {}
            DetectorChoice::File(p) if !p.is_file() => {
                return Err(Error::InvalidConfig(format!(
                    "detections file {} not found",
                    p.display()
                )));
            }
            DetectorChoice::File(_) => {}
        }
        if let Some(p) = &self.mask_file {
            if !p.is_file() {
                return Err(Error::InvalidConfig(format!("mask file {} not found", p.display())));
            }
        }
        for out in [&self.events_path, &self.summary_path].into_iter().flatten() {
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                if !parent.is_dir() {
                    return Err(Error::InvalidConfig(format!(
                        "output directory {} does not exist",
                        parent.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn effective_workers(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
