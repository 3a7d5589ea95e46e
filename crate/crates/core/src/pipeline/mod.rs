//! End-to-end screening over frame streams.

mod config;
mod events;
mod stream;

pub use config::{DetectorChoice, PipelineConfig, CONFIG_ENV, CONFIG_KEYS, DEFAULT_TARGET_FPS};
pub use events::{read_event_log, ErrorEvent, ScreeningEvent, StreamEvent, StreamSummary};
pub use stream::{run_stream, FrameInput, StreamContext};

use std::path::Path;

use crate::data::Dataset;
use crate::detect::external::parse_external_masks;
use crate::detect::{BaselineDetector, CommandDetector, FaceDetector, PrecomputedDetections};
use crate::screen::MaskSource;
use crate::{Error, Result};

/// Instantiates the detector named by the configuration.
pub fn build_detector(cfg: &PipelineConfig) -> Result<Box<dyn FaceDetector>> {
    Ok(match &cfg.detector {
        DetectorChoice::Baseline => Box::new(BaselineDetector { config: cfg.baseline }),
        DetectorChoice::Command(cmd) => Box::new(CommandDetector::from_command_line(cmd)?),
        DetectorChoice::File(path) => Box::new(PrecomputedDetections::from_path(path)?),
    })
}

pub fn build_mask_source(cfg: &PipelineConfig) -> Result<MaskSource> {
    match &cfg.mask_file {
        None => Ok(MaskSource::Heuristic),
        Some(path) => read_masks(path).map(MaskSource::External),
    }
}

fn read_masks(path: &Path) -> Result<Vec<crate::detect::external::ExternalMask>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_external_masks(std::io::BufReader::new(file))
}

/// One file input per manifest entry; the frame id is the entry's index.
pub fn dataset_inputs(dataset: &Dataset) -> Vec<FrameInput> {
    dataset
        .manifest
        .iter()
        .enumerate()
        .map(|(i, entry)| FrameInput::File {
            path: dataset.image_path(entry),
            frame_id: i as u64,
            timestamp: entry.timestamp.unwrap_or(0),
            lux: entry.lux,
        })
        .collect()
}
