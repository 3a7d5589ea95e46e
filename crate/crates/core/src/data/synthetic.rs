//! Seeded synthetic thermal scenes with exact ground truth.
//!
//! Each face is a 2D Gaussian bump over a uniform ambient temperature,
//! parameterized by its half-maximum radii: at normalized elliptical
//! distance 1 from the center the bump is at half its amplitude. The face's
//! ground-truth box is the pixel box of that half-maximum ellipse. A masked
//! face has the bottom rows of its box shifted by `mask_offset`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::detect::PixelRect;
use crate::evaluate::Annotation;
use crate::radiometric::{ThermalFrame, DEFAULT_HEIGHT, DEFAULT_WIDTH};
use crate::{Error, Result};

pub const DEFAULT_MASK_OFFSET: f64 = -6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticFace {
    /// Pixel coordinates of the peak.
    pub center: (f64, f64),
    /// Half-maximum radii `(rx, ry)` in pixels.
    pub radii: (f64, f64),
    pub peak_temp: f64,
    pub masked: bool,
    /// °C added to the masked rows.
    pub mask_offset: f64,
}

impl SyntheticFace {
    pub fn new(center: (f64, f64), radii: (f64, f64), peak_temp: f64) -> Self {
        Self {
            center,
            radii,
            peak_temp,
            masked: false,
            mask_offset: DEFAULT_MASK_OFFSET,
        }
    }

    pub fn with_mask(mut self, masked: bool) -> Self {
        self.masked = masked;
        self
    }

    /// Pixel box of the half-maximum ellipse: every pixel `(x, y)` with
    /// `|x - cx| <= rx` and `|y - cy| <= ry`.
    pub fn pixel_box(&self) -> PixelRect {
        let (cx, cy) = self.center;
        let (rx, ry) = self.radii;
        PixelRect {
            x0: (cx - rx).ceil().max(0.0) as usize,
            y0: (cy - ry).ceil().max(0.0) as usize,
            x1: ((cx + rx).floor() + 1.0).max(0.0) as usize,
            y1: ((cy + ry).floor() + 1.0).max(0.0) as usize,
        }
    }

    /// Noise-free bump contribution above ambient at pixel `(x, y)`.
    pub fn bump(&self, x: f64, y: f64, ambient: f64) -> f64 {
        let dx = (x - self.center.0) / self.radii.0;
        let dy = (y - self.center.1) / self.radii.1;
        (self.peak_temp - ambient) * (-(dx * dx + dy * dy)).exp2()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSceneConfig {
    pub width: usize,
    pub height: usize,
    pub ambient_temp: f64,
    pub faces: Vec<SyntheticFace>,
    pub noise_sigma: f64,
    pub seed: u64,
    /// Fraction of each masked face's box height, from the bottom, that is cooled.
    pub mask_fraction: f64,
    pub frame_id: u64,
    pub image_name: String,
}

impl Default for SyntheticSceneConfig {
    fn default() -> Self {
        Self {
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            ambient_temp: 22.0,
            faces: Vec::new(),
            noise_sigma: 0.1,
            seed: 0,
            mask_fraction: 0.45,
            frame_id: 0,
            image_name: "synthetic".into(),
        }
    }
}

impl SyntheticSceneConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.width == 0 || self.height == 0 {
            return bad("scene dimensions must be positive".into());
        }
        if !self.ambient_temp.is_finite() || !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return bad("ambient must be finite and noise_sigma non-negative".into());
        }
        if !(self.mask_fraction > 0.0 && self.mask_fraction < 1.0) {
            return bad(format!("mask_fraction {} outside (0, 1)", self.mask_fraction));
        }
        for (i, f) in self.faces.iter().enumerate() {
            let (cx, cy) = f.center;
            let (rx, ry) = f.radii;
            if ![cx, cy, rx, ry, f.peak_temp, f.mask_offset]
                .iter()
                .all(|v| v.is_finite())
            {
                return bad(format!("face {i} has non-finite parameters"));
            }
            if rx <= 0.0 || ry <= 0.0 {
                return bad(format!("face {i} radii must be positive"));
            }
            if cx - rx < 0.0 || cy - ry < 0.0 || cx + rx >= self.width as f64 || cy + ry >= self.height as f64 {
                return bad(format!(
                    "face {i} extends outside the {}x{} frame",
                    self.width, self.height
                ));
            }
        }
        for i in 0..self.faces.len() {
            for j in i + 1..self.faces.len() {
                let (a, b) = (self.faces[i].pixel_box(), self.faces[j].pixel_box());
                let overlap = a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
                if overlap {
                    return bad(format!("faces {i} and {j} overlap"));
                }
            }
        }
        Ok(())
    }
}

/// Renders a scene and its annotations (one per face, in face order).
pub fn generate_synthetic_frame(cfg: &SyntheticSceneConfig) -> Result<(ThermalFrame, Vec<Annotation>)> {
    cfg.validate()?;
    let (w, h) = (cfg.width, cfg.height);
    let mut temps = vec![cfg.ambient_temp; w * h];

    for face in &cfg.faces {
        let rect = face.pixel_box();
        // The bump is negligible (< 2^-36 of its amplitude) beyond 6 radii.
        let reach_x = 6.0 * face.radii.0;
        let reach_y = 6.0 * face.radii.1;
        let x0 = (face.center.0 - reach_x).floor().max(0.0) as usize;
        let x1 = ((face.center.0 + reach_x).ceil() as usize + 1).min(w);
        let y0 = (face.center.1 - reach_y).floor().max(0.0) as usize;
        let y1 = ((face.center.1 + reach_y).ceil() as usize + 1).min(h);
        for y in y0..y1 {
            for x in x0..x1 {
                temps[y * w + x] += face.bump(x as f64, y as f64, cfg.ambient_temp);
            }
        }
        if face.masked {
            let patch = rect.bottom_rows(cfg.mask_fraction);
            for y in patch.y0..patch.y1 {
                for x in patch.x0..patch.x1 {
                    temps[y * w + x] += face.mask_offset;
                }
            }
        }
    }

    if cfg.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let normal = Normal::new(0.0, cfg.noise_sigma).map_err(|e| Error::InvalidConfig(format!("noise: {e}")))?;
        for t in &mut temps {
            *t += normal.sample(&mut rng);
        }
    }

    let frame = ThermalFrame::new(cfg.frame_id, w, h, temps.into_iter().map(|t| t as f32).collect())?;
    let annotations = cfg
        .faces
        .iter()
        .map(|f| Annotation {
            image_name: cfg.image_name.clone(),
            bbox: f.pixel_box().to_bbox(),
            mask: f.masked,
            lux: None,
            timestamp: None,
        })
        .collect();
    Ok((frame, annotations))
}
