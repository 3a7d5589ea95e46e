use std::path::Path;

use serde::{Deserialize, Serialize};

use super::components::{connected_components, threshold_body_band};
use super::{Detection, FaceDetector, PixelRect};
use crate::radiometric::ThermalFrame;
use crate::raster::NormalizedImage;
use crate::{Error, Result};

/// A region of this many pixels gets confidence 1.
pub const REFERENCE_AREA: f64 = 900.0;

/// Closed interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TempBand {
    pub min: f64,
    pub max: f64,
}

impl TempBand {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::InvalidConfig(format!(
                "{what} must be a non-empty interval, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineDetectorConfig {
    /// Temperatures (°C) counted as exposed skin.
    pub body_band: TempBand,
    /// Smallest accepted region, in pixels.
    pub min_area: usize,
    /// Accepted box width / height.
    pub aspect_ratio_band: TempBand,
    /// Regions whose boxes are fewer than this many pixels apart are merged.
    pub merge_gap: usize,
}

impl Default for BaselineDetectorConfig {
    fn default() -> Self {
        Self {
            body_band: TempBand::new(30.0, 40.0),
            min_area: 64,
            aspect_ratio_band: TempBand::new(0.4, 1.6),
            merge_gap: 2,
        }
    }
}

impl BaselineDetectorConfig {
    pub fn validate(&self) -> Result<()> {
        self.body_band.validate("body_band")?;
        self.aspect_ratio_band.validate("aspect_ratio_band")?;
        if self.min_area == 0 {
            return Err(Error::InvalidConfig("min_area must be positive".into()));
        }
        Ok(())
    }
}

/// Warm-region face detector.
///
/// Pixels inside the body band are grouped into 8-connected regions; regions
/// closer than `merge_gap` are merged into their union box; the survivors of
/// the area and aspect-ratio filters become detections with confidence
/// `min(1, area / 900)`, sorted by confidence descending.
pub fn detect_faces_baseline(frame: &ThermalFrame, cfg: &BaselineDetectorConfig) -> Result<Vec<Detection>> {
    cfg.validate()?;
    let mask = threshold_body_band(frame, cfg.body_band.min, cfg.body_band.max);
    let candidates: Vec<(PixelRect, usize)> = connected_components(&mask)
        .into_iter()
        .map(|r| (r.bbox, r.area))
        .collect();
    let merged = merge_close(candidates, cfg.merge_gap);

    let mut dets = Vec::new();
    for (rect, area) in merged {
        if area < cfg.min_area {
            continue;
        }
        let aspect = rect.width() as f64 / rect.height() as f64;
        if !cfg.aspect_ratio_band.contains(aspect) {
            continue;
        }
        let confidence = (area as f64 / REFERENCE_AREA).min(1.0);
        dets.push(Detection::new(frame.frame_id(), rect.to_bbox(), confidence)?);
    }
    // Stable: equal confidences keep the (y0, x0) order.
    dets.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
    Ok(dets)
}

fn merge_close(mut items: Vec<(PixelRect, usize)>, gap: usize) -> Vec<(PixelRect, usize)> {
    'outer: loop {
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if items[i].0.gap(&items[j].0) < gap {
                    let (rect, area) = items.remove(j);
                    items[i] = (items[i].0.union(&rect), items[i].1 + area);
                    continue 'outer;
                }
            }
        }
        break;
    }
    items.sort_by_key(|(r, _)| (r.y0, r.x0));
    items
}

/// [`detect_faces_baseline`] behind the [`FaceDetector`] trait.
#[derive(Debug, Clone, Default)]
pub struct BaselineDetector {
    pub config: BaselineDetectorConfig,
}

impl FaceDetector for BaselineDetector {
    fn detect(&self, frame: &ThermalFrame, _: &NormalizedImage, _: Option<&Path>) -> Result<Vec<Detection>> {
        detect_faces_baseline(frame, &self.config)
    }
}
