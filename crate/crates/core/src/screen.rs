//! Per-person fever and mask screening.
//!
//! Fever uses the maximum temperature inside the face box as a proxy for
//! body temperature and flags anything strictly above 37.5 °C. The mask
//! heuristic relies on a worn mask attenuating emitted infrared: the lower
//! face then reads several degrees colder than the forehead.

use serde::{Deserialize, Serialize};

use crate::detect::external::ExternalMask;
use crate::detect::{BoundingBox, Detection, PixelRect};
use crate::evaluate::iou;
use crate::radiometric::ThermalFrame;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningConfig {
    /// °C; fever iff the face maximum is strictly greater.
    pub fever_threshold: f64,
    /// °C; mask iff upper-face mean exceeds lower-face mean by more than this.
    pub mask_delta_threshold: f64,
    /// Fraction of box height, from the top, averaged as the upper face.
    pub upper_face_fraction: f64,
    /// Fraction of box height, from the bottom, averaged as the lower face.
    pub lower_face_fraction: f64,
}

impl Default for ScreeningConfig {
    fn default() -> Self {
        Self {
            fever_threshold: 37.5,
            mask_delta_threshold: 2.0,
            upper_face_fraction: 0.40,
            lower_face_fraction: 0.45,
        }
    }
}

impl ScreeningConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.fever_threshold.is_finite() || !self.mask_delta_threshold.is_finite() {
            return Err(Error::InvalidConfig("screening thresholds must be finite".into()));
        }
        let (u, l) = (self.upper_face_fraction, self.lower_face_fraction);
        if !(u > 0.0 && u < 1.0 && l > 0.0 && l < 1.0 && u + l <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "face fractions must lie in (0, 1) and sum to at most 1, got {u} and {l}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersonScreeningResult {
    pub frame_id: u64,
    pub bbox: BoundingBox,
    pub max_temp: f64,
    pub fever: bool,
    pub mask: bool,
    /// Upper-face mean minus lower-face mean, °C. Absent when the mask
    /// verdict came from an external classifier.
    pub mask_score: Option<f64>,
}

/// A detection that could not be screened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonFailure {
    pub frame_id: u64,
    pub bbox: BoundingBox,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PersonOutcome {
    Screened(PersonScreeningResult),
    Failed(PersonFailure),
}

impl PersonOutcome {
    pub fn result(&self) -> Option<&PersonScreeningResult> {
        match self {
            PersonOutcome::Screened(r) => Some(r),
            PersonOutcome::Failed(_) => None,
        }
    }
}

fn pixels_in_frame(frame: &ThermalFrame, bbox: &BoundingBox) -> Result<PixelRect> {
    if !bbox.fits_within(frame.width(), frame.height()) {
        return Err(Error::Screening(format!(
            "box [{}, {}, {}, {}] outside {}x{} frame",
            bbox.x_min,
            bbox.y_min,
            bbox.x_max,
            bbox.y_max,
            frame.width(),
            frame.height()
        )));
    }
    Ok(bbox.pixel_rect())
}

fn region_temps<'a>(frame: &'a ThermalFrame, rect: &PixelRect) -> impl Iterator<Item = f64> + 'a {
    let (x0, x1) = (rect.x0, rect.x1);
    (rect.y0..rect.y1).flat_map(move |y| frame.row(y)[x0..x1].iter().map(|&t| f64::from(t)))
}

fn region_mean(frame: &ThermalFrame, rect: &PixelRect) -> f64 {
    let n = rect.width() * rect.height();
    region_temps(frame, rect).sum::<f64>() / n as f64
}

pub fn max_face_temperature(frame: &ThermalFrame, bbox: &BoundingBox) -> Result<f64> {
    let rect = pixels_in_frame(frame, bbox)?;
    Ok(region_temps(frame, &rect).fold(f64::NEG_INFINITY, f64::max))
}

pub fn classify_fever(max_temp: f64, cfg: &ScreeningConfig) -> bool {
    max_temp > cfg.fever_threshold
}

/// Returns `(mask, mask_score)`.
pub fn classify_mask_heuristic(frame: &ThermalFrame, bbox: &BoundingBox, cfg: &ScreeningConfig) -> Result<(bool, f64)> {
    let rect = pixels_in_frame(frame, bbox)?;
    let upper = rect.top_rows(cfg.upper_face_fraction);
    let lower = rect.bottom_rows(cfg.lower_face_fraction);
    if upper.is_empty() || lower.is_empty() {
        return Err(Error::Screening(format!(
            "box of {} rows too small for upper/lower face regions",
            rect.height()
        )));
    }
    let score = region_mean(frame, &upper) - region_mean(frame, &lower);
    Ok((score > cfg.mask_delta_threshold, score))
}

/// Where mask verdicts come from.
#[derive(Debug, Clone, Default)]
pub enum MaskSource {
    #[default]
    Heuristic,
    /// Verdicts from an external classifier, matched to detections by the
    /// best IOU (at least 0.5) on the same frame.
    External(Vec<ExternalMask>),
}

fn screen_person(
    frame: &ThermalFrame,
    det: &Detection,
    cfg: &ScreeningConfig,
    masks: &MaskSource,
) -> Result<PersonScreeningResult> {
    let max_temp = max_face_temperature(frame, &det.bbox)?;
    let (mask, mask_score) = match masks {
        MaskSource::Heuristic => {
            let (mask, score) = classify_mask_heuristic(frame, &det.bbox, cfg)?;
            (mask, Some(score))
        }
        MaskSource::External(verdicts) => {
            let best = verdicts
                .iter()
                .filter(|m| m.frame_id == frame.frame_id())
                .map(|m| (iou(&m.bbox, &det.bbox), m.mask))
                .filter(|(overlap, _)| *overlap >= 0.5)
                .max_by(|a, b| a.0.total_cmp(&b.0));
            match best {
                Some((_, mask)) => (mask, None),
                None => return Err(Error::Screening("no external mask verdict for this box".into())),
            }
        }
    };
    Ok(PersonScreeningResult {
        frame_id: frame.frame_id(),
        bbox: det.bbox,
        max_temp,
        fever: classify_fever(max_temp, cfg),
        mask,
        mask_score,
    })
}

/// Screens every detection on a frame, in input order. A detection that
/// cannot be screened yields a failure record instead of aborting the frame.
pub fn screen_frame(
    frame: &ThermalFrame,
    detections: &[Detection],
    cfg: &ScreeningConfig,
    masks: &MaskSource,
) -> Result<Vec<PersonOutcome>> {
    cfg.validate()?;
    Ok(detections
        .iter()
        .map(|det| {
            if det.frame_id != frame.frame_id() {
                return PersonOutcome::Failed(PersonFailure {
                    frame_id: det.frame_id,
                    bbox: det.bbox,
                    reason: format!("detection belongs to frame {}, not {}", det.frame_id, frame.frame_id()),
                });
            }
            match screen_person(frame, det, cfg, masks) {
                Ok(r) => PersonOutcome::Screened(r),
                Err(e) => PersonOutcome::Failed(PersonFailure {
                    frame_id: det.frame_id,
                    bbox: det.bbox,
                    reason: e.to_string(),
                }),
            }
        })
        .collect())
}
