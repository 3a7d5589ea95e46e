//! `ground_truth.txt`: one face per line,
//! `image_name x_min y_min x_max y_max mask`, space separated, corner-pair
//! pixel boxes (half-open), mask 0 or 1. Blank lines and lines starting
//! with `#` are ignored.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use crate::detect::BoundingBox;
use crate::evaluate::Annotation;
use crate::{Error, Result};

pub const GROUND_TRUTH_FILE: &str = "ground_truth.txt";
/// Spelling used by the original dataset release.
pub const GROUND_TRUTH_FILE_ALT: &str = "ground truth.txt";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundTruthRecord {
    pub image_name: String,
    pub x_min: u32,
    pub y_min: u32,
    pub x_max: u32,
    pub y_max: u32,
    pub mask: bool,
}

pub(crate) fn check_image_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() {
        Err("image name is empty".into())
    } else if name.chars().any(char::is_whitespace) {
        Err(format!("image name {name:?} contains whitespace"))
    } else if name.starts_with('#') {
        Err(format!("image name {name:?} starts with '#'"))
    } else {
        Ok(())
    }
}

impl GroundTruthRecord {
    pub fn new(
        image_name: impl Into<String>,
        x_min: u32,
        y_min: u32,
        x_max: u32,
        y_max: u32,
        mask: bool,
    ) -> Result<Self> {
        let image_name = image_name.into();
        check_image_name(&image_name).map_err(Error::InvalidBox)?;
        if x_max <= x_min {
            return Err(Error::InvalidBox(format!("x_max ≤ x_min ({x_max} ≤ {x_min})")));
        }
        if y_max <= y_min {
            return Err(Error::InvalidBox(format!("y_max ≤ y_min ({y_max} ≤ {y_min})")));
        }
        Ok(Self {
            image_name,
            x_min,
            y_min,
            x_max,
            y_max,
            mask,
        })
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox {
            x_min: f64::from(self.x_min),
            y_min: f64::from(self.y_min),
            x_max: f64::from(self.x_max),
            y_max: f64::from(self.y_max),
        }
    }

    pub fn to_annotation(&self) -> Annotation {
        Annotation {
            image_name: self.image_name.clone(),
            bbox: self.bbox(),
            mask: self.mask,
            lux: None,
            timestamp: None,
        }
    }

    /// Converts an annotation whose box lies on integer pixel corners.
    pub fn from_annotation(a: &Annotation) -> Result<Self> {
        let to_u32 = |v: f64| -> Result<u32> {
            if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
                return Err(Error::InvalidBox(format!("coordinate {v} is not a pixel corner")));
            }
            Ok(v as u32)
        };
        Self::new(
            a.image_name.clone(),
            to_u32(a.bbox.x_min)?,
            to_u32(a.bbox.y_min)?,
            to_u32(a.bbox.x_max)?,
            to_u32(a.bbox.y_max)?,
            a.mask,
        )
    }
}

pub fn parse_ground_truth(reader: impl BufRead) -> Result<Vec<GroundTruthRecord>> {
    const FIELDS: [&str; 6] = ["image_name", "x_min", "y_min", "x_max", "y_max", "mask"];
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != FIELDS.len() {
            return Err(Error::parse(
                lineno,
                "record",
                format!("expected {} fields, found {}", FIELDS.len(), parts.len()),
            ));
        }
        let mut coords = [0u32; 4];
        for (k, slot) in coords.iter_mut().enumerate() {
            *slot = parts[k + 1].parse().map_err(|_| {
                Error::parse(
                    lineno,
                    FIELDS[k + 1],
                    format!("not a pixel coordinate: {:?}", parts[k + 1]),
                )
            })?;
        }
        let mask = match parts[5] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::parse(
                    lineno,
                    "mask",
                    format!("expected 0 or 1, found {other:?}"),
                ))
            }
        };
        let rec = GroundTruthRecord::new(parts[0], coords[0], coords[1], coords[2], coords[3], mask)
            .map_err(|e| Error::parse(lineno, "bbox", e.to_string()))?;
        records.push(rec);
    }
    Ok(records)
}

/// Writes records sorted by `(image_name, y_min, x_min)`; ties keep input order.
pub fn write_ground_truth(records: &[GroundTruthRecord], mut out: impl Write) -> Result<()> {
    let mut sorted: Vec<&GroundTruthRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.image_name
            .cmp(&b.image_name)
            .then(a.y_min.cmp(&b.y_min))
            .then(a.x_min.cmp(&b.x_min))
    });
    for r in sorted {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            r.image_name,
            r.x_min,
            r.y_min,
            r.x_max,
            r.y_max,
            u8::from(r.mask)
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ground_truth(path: &Path) -> Result<Vec<GroundTruthRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_ground_truth(std::io::BufReader::new(file))
}

pub fn save_ground_truth(records: &[GroundTruthRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_ground_truth(records, std::io::BufWriter::new(file))
}

/// Locates the ground-truth file in a dataset directory, accepting either spelling.
pub fn find_ground_truth(dir: &Path) -> Result<PathBuf> {
    [GROUND_TRUTH_FILE, GROUND_TRUTH_FILE_ALT]
        .iter()
        .map(|name| dir.join(name))
        .find(|p| p.is_file())
        .ok_or_else(|| Error::Dataset(format!("no {GROUND_TRUTH_FILE} in {}", dir.display())))
}
