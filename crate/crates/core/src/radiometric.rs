//! Radiometric frames and temperature-constrained normalization.
//!
//! A naive min-max stretch over the whole frame lets a single hot object
//! (a lamp, a coffee cup, a radiator) compress every face into a handful of
//! gray levels. Normalization here clamps the scene's range to a band around
//! body temperature first, so faces keep their contrast.

use serde::{Deserialize, Serialize};

use crate::raster::NormalizedImage;
use crate::{Error, Result};

/// Default camera resolution.
pub const DEFAULT_WIDTH: usize = 320;
pub const DEFAULT_HEIGHT: usize = 240;

/// A calibrated temperature image in °C plus frame metadata.
///
/// Temperatures are stored as `f32`, the precision of the on-disk sidecar
/// format, so a frame survives a save/load cycle unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalFrame {
    frame_id: u64,
    width: usize,
    height: usize,
    temps: Vec<f32>,
    timestamp: u64,
    lux: Option<f64>,
}

impl ThermalFrame {
    /// Builds a frame, rejecting empty dimensions, a size mismatch or any
    /// non-finite temperature.
    pub fn new(frame_id: u64, width: usize, height: usize, temps: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidFrame(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if temps.len() != width * height {
            return Err(Error::InvalidFrame(format!(
                "{width}x{height} frame needs {} temperatures, got {}",
                width * height,
                temps.len()
            )));
        }
        if let Some(i) = temps.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidFrame(format!(
                "non-finite temperature {} at pixel ({}, {})",
                temps[i],
                i % width,
                i / width
            )));
        }
        Ok(Self {
            frame_id,
            width,
            height,
            temps,
            timestamp: 0,
            lux: None,
        })
    }

    pub fn uniform(frame_id: u64, width: usize, height: usize, temp: f32) -> Result<Self> {
        Self::new(frame_id, width, height, vec![temp; width * height])
    }

    pub fn with_frame_id(mut self, frame_id: u64) -> Self {
        self.frame_id = frame_id;
        self
    }

    pub fn with_timestamp(mut self, timestamp_ms: u64) -> Self {
        self.timestamp = timestamp_ms;
        self
    }

    pub fn with_lux(mut self, lux: Option<f64>) -> Self {
        self.lux = lux;
        self
    }

    pub fn frame_id(&self) -> u64 {
        self.frame_id
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn temps(&self) -> &[f32] {
        &self.temps
    }

    /// Milliseconds since the Unix epoch.
    pub fn timestamp(&self) -> u64 {
        self.timestamp
    }

    pub fn lux(&self) -> Option<f64> {
        self.lux
    }

    pub fn temp(&self, x: usize, y: usize) -> f32 {
        self.temps[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f32] {
        &self.temps[y * self.width..(y + 1) * self.width]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// `(clamp(T, L, U) - L) / (U - L)`; always lands in `[0, 1]`.
    #[default]
    BandClamp,
    /// `(T - L) / U` clamped to `[0, 1]`, the formula as originally printed.
    Literal,
}

impl std::str::FromStr for NormalizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "band_clamp" | "band-clamp" => Ok(Self::BandClamp),
            "literal" => Ok(Self::Literal),
            other => Err(Error::InvalidConfig(format!(
                "unknown normalization mode {other:?} (expected band_clamp or literal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConfig {
    pub lower_clamp: f64,
    pub upper_clamp: f64,
    pub mode: NormalizationMode,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            lower_clamp: 20.0,
            upper_clamp: 45.0,
            mode: NormalizationMode::BandClamp,
        }
    }
}

impl NormalizationConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.lower_clamp.is_finite() || !self.upper_clamp.is_finite() {
            return Err(Error::InvalidConfig("normalization clamps must be finite".into()));
        }
        if self.lower_clamp >= self.upper_clamp {
            return Err(Error::InvalidConfig(format!(
                "lower_clamp {} must be below upper_clamp {}",
                self.lower_clamp, self.upper_clamp
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

pub fn frame_stats(frame: &ThermalFrame) -> FrameStats {
    let (min, max, sum) = frame
        .temps
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |(lo, hi, sum), &t| {
            let t = f64::from(t);
            (lo.min(t), hi.max(t), sum + t)
        });
    FrameStats {
        min,
        max,
        mean: sum / frame.temps.len() as f64,
    }
}

/// The effective `[L, U]` band for a frame: the frame's own range
/// intersected with the configured clamps.
pub fn effective_band(stats: &FrameStats, cfg: &NormalizationConfig) -> (f64, f64) {
    (stats.min.max(cfg.lower_clamp), stats.max.min(cfg.upper_clamp))
}

pub fn normalize_frame(frame: &ThermalFrame, cfg: &NormalizationConfig) -> Result<NormalizedImage> {
    cfg.validate()?;
    let (lo, hi) = effective_band(&frame_stats(frame), cfg);
    let pixels: Vec<f64> = match cfg.mode {
        // Degenerate band (e.g. a uniform frame): mid-gray everywhere.
        NormalizationMode::BandClamp if hi <= lo => vec![0.5; frame.temps.len()],
        NormalizationMode::BandClamp => {
            let span = hi - lo;
            frame
                .temps
                .iter()
                .map(|&t| ((f64::from(t).clamp(lo, hi) - lo) / span).clamp(0.0, 1.0))
                .collect()
        }
        NormalizationMode::Literal => frame
            .temps
            .iter()
            .map(|&t| {
                let v = (f64::from(t) - lo) / hi;
                if v.is_finite() {
                    v.clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect(),
    };
    Ok(NormalizedImage::from_unit_pixels(frame.width, frame.height, pixels))
}

/// Plain min-max stretch over the frame's full range. Kept for comparison
/// with [`normalize_frame`]; uniform frames map to 0.5.
pub fn normalize_min_max(frame: &ThermalFrame) -> NormalizedImage {
    let stats = frame_stats(frame);
    let span = stats.max - stats.min;
    let pixels = frame
        .temps
        .iter()
        .map(|&t| {
            if span > 0.0 {
                ((f64::from(t) - stats.min) / span).clamp(0.0, 1.0)
            } else {
                0.5
            }
        })
        .collect();
    NormalizedImage::from_unit_pixels(frame.width, frame.height, pixels)
}

pub fn to_byte_image(img: &NormalizedImage) -> image::GrayImage {
    img.to_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_frame(temps: &[f32]) -> ThermalFrame {
        ThermalFrame::new(0, temps.len(), 1, temps.to_vec()).unwrap()
    }

    #[test]
    fn band_clamp_worked_example() {
        let frame = row_frame(&[15.0, 20.0, 32.5, 45.0, 50.0]);
        let img = normalize_frame(&frame, &NormalizationConfig::default()).unwrap();
        assert_eq!(img.pixels(), &[0.0, 0.0, 0.5, 1.0, 1.0]);
    }

    #[test]
    fn uniform_frame_is_mid_gray() {
        let frame = ThermalFrame::uniform(0, 4, 3, 30.0).unwrap();
        for mode in [NormalizationMode::BandClamp, NormalizationMode::Literal] {
            let cfg = NormalizationConfig {
                mode,
                ..Default::default()
            };
            let img = normalize_frame(&frame, &cfg).unwrap();
            if mode == NormalizationMode::BandClamp {
                assert!(img.pixels().iter().all(|&p| p == 0.5));
            } else {
                assert!(img.pixels().iter().all(|&p| (0.0..=1.0).contains(&p)));
            }
        }
    }

    #[test]
    fn literal_mode_follows_printed_formula() {
        // L = 20, U = 45: (32.5 - 20) / 45
        let frame = row_frame(&[15.0, 32.5, 50.0]);
        let cfg = NormalizationConfig {
            mode: NormalizationMode::Literal,
            ..Default::default()
        };
        let img = normalize_frame(&frame, &cfg).unwrap();
        assert_eq!(img.pixels()[0], 0.0);
        assert!((img.pixels()[1] - 12.5 / 45.0).abs() < 1e-12);
        assert!((img.pixels()[2] - 30.0 / 45.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_temperatures() {
        assert!(ThermalFrame::new(0, 2, 1, vec![30.0, f32::NAN]).is_err());
        assert!(ThermalFrame::new(0, 2, 1, vec![f32::INFINITY, 30.0]).is_err());
        assert!(ThermalFrame::new(0, 0, 1, vec![]).is_err());
        assert!(ThermalFrame::new(0, 2, 2, vec![30.0; 3]).is_err());
    }

    #[test]
    fn rejects_inverted_clamps() {
        let frame = row_frame(&[30.0]);
        let cfg = NormalizationConfig {
            lower_clamp: 45.0,
            upper_clamp: 20.0,
            ..Default::default()
        };
        assert!(normalize_frame(&frame, &cfg).is_err());
    }

    #[test]
    fn stats_examples() {
        let s = frame_stats(&ThermalFrame::uniform(0, 3, 3, 30.0).unwrap());
        assert_eq!((s.min, s.max, s.mean), (30.0, 30.0, 30.0));
        let s = frame_stats(&row_frame(&[20.0, 40.0]));
        assert_eq!((s.min, s.max, s.mean), (20.0, 40.0, 30.0));
    }

    #[test]
    fn byte_image_endpoints() {
        let img = NormalizedImage::new(3, 1, vec![0.0, 0.5, 1.0]).unwrap();
        assert_eq!(to_byte_image(&img).as_raw(), &[0, 128, 255]);
    }
}
