//! Face detection on thermal frames.
//!
//! [`detect_faces_baseline`] finds warm, face-sized regions inside a body
//! temperature band. Trained detectors plug in through the line-oriented
//! wire format in [`external`], either as a file of precomputed records or
//! as a subprocess invoked per frame.

mod baseline;
mod components;
pub mod external;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::radiometric::ThermalFrame;
use crate::raster::NormalizedImage;
use crate::{Error, Result};

pub use baseline::{detect_faces_baseline, BaselineDetector, BaselineDetectorConfig, TempBand, REFERENCE_AREA};
pub use components::{connected_components, threshold_body_band, BinaryMask, Region};
pub use external::{parse_external_detections, write_detection_line, CommandDetector, PrecomputedDetections};

/// Axis-aligned box in pixel coordinates, half-open: `[x_min, x_max) x [y_min, y_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct BoundingBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        if ![x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidBox("coordinates must be finite".into()));
        }
        if x_min < 0.0 || y_min < 0.0 {
            return Err(Error::InvalidBox(format!("negative origin ({x_min}, {y_min})")));
        }
        if x_max <= x_min {
            return Err(Error::InvalidBox(format!("x_max ≤ x_min ({x_max} ≤ {x_min})")));
        }
        if y_max <= y_min {
            return Err(Error::InvalidBox(format!("y_max ≤ y_min ({y_max} ≤ {y_min})")));
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        self.x_max <= width as f64 && self.y_max <= height as f64
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Result<Self> {
        Self::new(self.x_min + dx, self.y_min + dy, self.x_max + dx, self.y_max + dy)
    }

    /// Pixels touched by the box: columns `floor(x_min)..ceil(x_max)`, rows likewise.
    pub fn pixel_rect(&self) -> PixelRect {
        PixelRect {
            x0: self.x_min.floor() as usize,
            y0: self.y_min.floor() as usize,
            x1: self.x_max.ceil() as usize,
            y1: self.y_max.ceil() as usize,
        }
    }
}

impl TryFrom<[f64; 4]> for BoundingBox {
    type Error = Error;

    fn try_from(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<BoundingBox> for [f64; 4] {
    fn from(b: BoundingBox) -> Self {
        [b.x_min, b.y_min, b.x_max, b.y_max]
    }
}

/// Integer pixel rectangle, half-open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl PixelRect {
    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }

    /// The top `fraction` of the rows, `floor(fraction * height)` of them.
    pub fn top_rows(&self, fraction: f64) -> PixelRect {
        let n = fraction_of(self.height(), fraction);
        PixelRect {
            y1: self.y0 + n,
            ..*self
        }
    }

    /// The bottom `fraction` of the rows, `floor(fraction * height)` of them.
    pub fn bottom_rows(&self, fraction: f64) -> PixelRect {
        let n = fraction_of(self.height(), fraction);
        PixelRect {
            y0: self.y1 - n,
            ..*self
        }
    }

    pub fn is_empty(&self) -> bool {
        self.x1 <= self.x0 || self.y1 <= self.y0
    }

    pub fn to_bbox(&self) -> BoundingBox {
        BoundingBox {
            x_min: self.x0 as f64,
            y_min: self.y0 as f64,
            x_max: self.x1 as f64,
            y_max: self.y1 as f64,
        }
    }

    pub(crate) fn union(&self, other: &PixelRect) -> PixelRect {
        PixelRect {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }

    /// Chebyshev gap between two rectangles; 0 when they touch or overlap.
    pub(crate) fn gap(&self, other: &PixelRect) -> usize {
        let gx = other.x0.saturating_sub(self.x1).max(self.x0.saturating_sub(other.x1));
        let gy = other.y0.saturating_sub(self.y1).max(self.y0.saturating_sub(other.y1));
        gx.max(gy)
    }
}

fn fraction_of(n: usize, fraction: f64) -> usize {
    // The epsilon keeps e.g. 0.45 * 20 from flooring to 8.
    ((fraction * n as f64) + 1e-9).floor().max(0.0) as usize
}

/// One face hypothesis on one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub frame_id: u64,
    pub bbox: BoundingBox,
    pub confidence: f64,
}

impl Detection {
    pub fn new(frame_id: u64, bbox: BoundingBox, confidence: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&confidence) {
            return Err(Error::InvalidBox(format!("confidence out of range: {confidence}")));
        }
        Ok(Self {
            frame_id,
            bbox,
            confidence,
        })
    }
}

/// Anything that can turn a frame into face detections.
///
/// `source` is the file the frame was loaded from, when there is one;
/// subprocess-backed detectors need it.
pub trait FaceDetector: Send + Sync {
    fn detect(
        &self,
        frame: &ThermalFrame,
        normalized: &NormalizedImage,
        source: Option<&Path>,
    ) -> Result<Vec<Detection>>;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_invariants() {
        assert!(BoundingBox::new(0.0, 0.0, 10.0, 10.0).is_ok());
        let err = BoundingBox::new(50.0, 30.0, 10.0, 96.0).unwrap_err();
        assert!(err.to_string().contains("x_max ≤ x_min"));
        assert!(BoundingBox::new(0.0, 5.0, 1.0, 5.0).is_err());
        assert!(BoundingBox::new(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(BoundingBox::new(0.0, 0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn row_bands_use_floor() {
        let r = PixelRect {
            x0: 0,
            y0: 10,
            x1: 5,
            y1: 30,
        };
        assert_eq!(r.top_rows(0.40), PixelRect { y1: 18, ..r });
        assert_eq!(r.bottom_rows(0.45), PixelRect { y0: 21, ..r });
        let tiny = PixelRect {
            x0: 0,
            y0: 0,
            x1: 1,
            y1: 1,
        };
        assert!(tiny.top_rows(0.4).is_empty());
    }

    #[test]
    fn rect_gap() {
        let a = PixelRect {
            x0: 0,
            y0: 0,
            x1: 5,
            y1: 5,
        };
        let b = PixelRect {
            x0: 7,
            y0: 0,
            x1: 9,
            y1: 5,
        };
        assert_eq!(a.gap(&b), 2);
        assert_eq!(b.gap(&a), 2);
        assert_eq!(a.gap(&a), 0);
    }

    #[test]
    fn confidence_bounds() {
        let b = BoundingBox::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(Detection::new(0, b, 1.5).is_err());
        assert!(Detection::new(0, b, -0.1).is_err());
        assert!(Detection::new(0, b, 1.0).is_ok());
    }
}
