//! Wire format for externally trained models.
//!
//! One JSON object per line, UTF-8, unknown fields ignored:
//!
//! ```text
//! {"frame_id":4,"bbox":[10,20,60,90],"confidence":0.93}
//! ```
//!
//! `bbox` is `[x_min, y_min, x_max, y_max]` in pixels. Mask classifiers use
//! the same framing with an integer `mask` (0 or 1) in place of
//! `confidence`. Blank lines are skipped.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{Map, Value};

use super::{BoundingBox, Detection, FaceDetector};
use crate::radiometric::ThermalFrame;
use crate::raster::NormalizedImage;
use crate::{Error, Result};

/// A mask verdict from an external classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExternalMask {
    pub frame_id: u64,
    pub bbox: BoundingBox,
    pub mask: bool,
}

fn parse_object(line: &str, lineno: usize) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(line) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Error::parse(lineno, "record", "expected a JSON object")),
        Err(e) => Err(Error::parse(lineno, "record", e.to_string())),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, lineno: usize) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::parse(lineno, name, "missing field"))
}

fn frame_id_field(obj: &Map<String, Value>, lineno: usize) -> Result<u64> {
    field(obj, "frame_id", lineno)?
        .as_u64()
        .ok_or_else(|| Error::parse(lineno, "frame_id", "expected a non-negative integer"))
}

fn bbox_field(obj: &Map<String, Value>, lineno: usize) -> Result<BoundingBox> {
    let coords = field(obj, "bbox", lineno)?
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| Error::parse(lineno, "bbox", "expected an array of four numbers"))?;
    let mut v = [0.0; 4];
    for (slot, c) in v.iter_mut().zip(coords) {
        *slot = c
            .as_f64()
            .ok_or_else(|| Error::parse(lineno, "bbox", "expected an array of four numbers"))?;
    }
    BoundingBox::try_from(v).map_err(|e| Error::parse(lineno, "bbox", e.to_string()))
}

fn for_each_record(reader: impl BufRead, mut f: impl FnMut(Map<String, Value>, usize) -> Result<()>) -> Result<()> {
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        f(parse_object(line, lineno)?, lineno)?;
    }
    Ok(())
}

/// Parses newline-delimited detection records.
pub fn parse_external_detections(reader: impl BufRead) -> Result<Vec<Detection>> {
    let mut out = Vec::new();
    for_each_record(reader, |obj, lineno| {
        let frame_id = frame_id_field(&obj, lineno)?;
        let bbox = bbox_field(&obj, lineno)?;
        let confidence = field(&obj, "confidence", lineno)?
            .as_f64()
            .ok_or_else(|| Error::parse(lineno, "confidence", "expected a number"))?;
        if !(0.0..=1.0).contains(&confidence) {
            return Err(Error::parse(lineno, "confidence", "confidence out of range"));
        }
        out.push(Detection {
            frame_id,
            bbox,
            confidence,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Parses newline-delimited mask-classifier records.
pub fn parse_external_masks(reader: impl BufRead) -> Result<Vec<ExternalMask>> {
    let mut out = Vec::new();
    for_each_record(reader, |obj, lineno| {
        let frame_id = frame_id_field(&obj, lineno)?;
        let bbox = bbox_field(&obj, lineno)?;
        let mask = match field(&obj, "mask", lineno)?.as_u64() {
            Some(0) => false,
            Some(1) => true,
            _ => return Err(Error::parse(lineno, "mask", "expected 0 or 1")),
        };
        out.push(ExternalMask { frame_id, bbox, mask });
        Ok(())
    })?;
    Ok(out)
}

/// Serializes one detection as a wire-format line (no trailing newline).
pub fn write_detection_line(det: &Detection) -> String {
    #[derive(serde::Serialize)]
    struct Line {
        frame_id: u64,
        bbox: [f64; 4],
        confidence: f64,
    }
    serde_json::to_string(&Line {
        frame_id: det.frame_id,
        bbox: det.bbox.into(),
        confidence: det.confidence,
    })
    .expect("detections serialize")
}

/// Detections read ahead of time, served per frame.
#[derive(Debug, Clone, Default)]
pub struct PrecomputedDetections {
    by_frame: HashMap<u64, Vec<Detection>>,
}

impl PrecomputedDetections {
    pub fn new(dets: impl IntoIterator<Item = Detection>) -> Self {
        let mut by_frame: HashMap<u64, Vec<Detection>> = HashMap::new();
        for d in dets {
            by_frame.entry(d.frame_id).or_default().push(d);
        }
        Self { by_frame }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(parse_external_detections(std::io::BufReader::new(file))?))
    }

    pub fn for_frame(&self, frame_id: u64) -> &[Detection] {
        self.by_frame.get(&frame_id).map_or(&[], Vec::as_slice)
    }
}

impl FaceDetector for PrecomputedDetections {
    fn detect(&self, frame: &ThermalFrame, _: &NormalizedImage, _: Option<&Path>) -> Result<Vec<Detection>> {
        Ok(self.for_frame(frame.frame_id()).to_vec())
    }
}

/// Runs `program [args..] <frame path>` per frame and reads detections from
/// its standard output. The subprocess does not know frame ids, so every
/// record it prints is attributed to the frame it was launched for.
#[derive(Debug, Clone)]
pub struct CommandDetector {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl CommandDetector {
    /// Splits a command line on whitespace: program first, then arguments.
    pub fn from_command_line(cmd: &str) -> Result<Self> {
        let mut parts = cmd.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| Error::InvalidConfig("empty detector command".into()))?;
        Ok(Self {
            program: program.into(),
            args: parts.map(str::to_string).collect(),
        })
    }
}

impl FaceDetector for CommandDetector {
    fn detect(&self, frame: &ThermalFrame, _: &NormalizedImage, source: Option<&Path>) -> Result<Vec<Detection>> {
        let source = source
            .ok_or_else(|| Error::InvalidConfig("external detector command needs frames loaded from files".into()))?;
        let output = Command::new(&self.program)
            .args(&self.args)
            .arg(source)
            .output()
            .map_err(|e| Error::io(&self.program, e))?;
        if !output.status.success() {
            return Err(Error::InvalidConfig(format!(
                "detector {} exited with {} on {}",
                self.program.display(),
                output.status,
                source.display()
            )));
        }
        let mut dets = parse_external_detections(output.stdout.as_slice())?;
        for d in &mut dets {
            d.frame_id = frame.frame_id();
        }
        Ok(dets)
    }
}
