//! Color-to-thermal augmentation.
//!
//! Visual face datasets are turned into thermal-looking training images in
//! two steps: a weighted grayscale conversion followed by a darkening power
//! law `O = I^(1/γ)` with γ drawn per image from `[0.3, 0.9]`. All pixel
//! arithmetic happens on the `[0, 1]` scale.
//!
//! Mask-classifier crops can additionally be emitted as negatives, since a
//! mask that renders bright in grayscale reads cold (dark) in thermal.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::data::GroundTruthRecord;
use crate::raster::GrayImage;
use crate::{Error, Result};

/// A color image with three `[0, 1]` channels stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    r: Vec<f64>,
    g: Vec<f64>,
    b: Vec<f64>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, r: Vec<f64>, g: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let n = width * height;
        if n == 0 {
            return Err(Error::InvalidImage("dimensions must be positive".into()));
        }
        for (name, ch) in [("R", &r), ("G", &g), ("B", &b)] {
            if ch.len() != n {
                return Err(Error::InvalidImage(format!(
                    "channel {name} has {} values, expected {n}",
                    ch.len()
                )));
            }
            if ch.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidImage(format!("channel {name} has values outside [0, 1]")));
            }
        }
        Ok(Self { width, height, r, g, b })
    }

    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Result<Self> {
        let n = width * height;
        Self::new(width, height, vec![rgb[0]; n], vec![rgb[1]; n], vec![rgb[2]; n])
    }

    pub fn from_rgb8(img: &image::RgbImage) -> Self {
        let n = (img.width() * img.height()) as usize;
        let (mut r, mut g, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for px in img.pixels() {
            r.push(f64::from(px[0]) / 255.0);
            g.push(f64::from(px[1]) / 255.0);
            b.push(f64::from(px[2]) / 255.0);
        }
        Self {
            width: img.width() as usize,
            height: img.height() as usize,
            r,
            g,
            b,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

/// Channel weights for the grayscale conversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrayCoefficients {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl GrayCoefficients {
    /// Weights as used for the published augmented dataset. They sum to
    /// 0.930, not 1, so white maps to 0.93.
    pub const PUBLISHED: Self = Self {
        r: 0.229,
        g: 0.587,
        b: 0.114,
    };

    /// ITU-R BT.601 luma weights.
    pub const BT601: Self = Self {
        r: 0.299,
        g: 0.587,
        b: 0.114,
    };

    fn validate(&self) -> Result<()> {
        if [self.r, self.g, self.b].iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gray coefficients must be finite and non-negative, got {self:?}"
            )));
        }
        Ok(())
    }
}

impl Default for GrayCoefficients {
    fn default() -> Self {
        Self::PUBLISHED
    }
}

impl std::str::FromStr for GrayCoefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "published" | "paper" => Ok(Self::PUBLISHED),
            "bt601" => Ok(Self::BT601),
            other => Err(Error::InvalidConfig(format!(
                "unknown coefficient set {other:?} (expected published or bt601)"
            ))),
        }
    }
}

/// Closed interval of gamma values to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRange {
    pub min: f64,
    pub max: f64,
}

impl GammaRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        let range = Self { min, max };
        range.validate()?;
        Ok(range)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0 && self.min <= self.max) {
            return Err(Error::InvalidConfig(format!(
                "gamma range must satisfy 0 < min <= max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, g: f64) -> bool {
        (self.min..=self.max).contains(&g)
    }
}

impl Default for GammaRange {
    fn default() -> Self {
        Self { min: 0.3, max: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentConfig {
    pub gray_coefficients: GrayCoefficients,
    pub gamma_range: GammaRange,
    pub seed: u64,
    /// Emit a negative alongside each mask-classifier crop.
    pub emit_negatives: bool,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            gray_coefficients: GrayCoefficients::PUBLISHED,
            gamma_range: GammaRange::default(),
            seed: 0,
            emit_negatives: true,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        self.gray_coefficients.validate()?;
        self.gamma_range.validate()
    }
}

pub fn rgb_to_gray(img: &RgbImage, coeffs: &GrayCoefficients) -> GrayImage {
    let pixels = img
        .r
        .iter()
        .zip(&img.g)
        .zip(&img.b)
        .map(|((&r, &g), &b)| (coeffs.r * r + coeffs.g * g + coeffs.b * b).clamp(0.0, 1.0))
        .collect();
    GrayImage::from_unit_pixels(img.width, img.height, pixels)
}

/// Power-law transform `O = I^(1/g)`. `g < 1` darkens, `g = 1` is the identity.
pub fn gamma_correct(img: &GrayImage, g: f64) -> Result<GrayImage> {
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::InvalidConfig(format!("gamma must be positive, got {g}")));
    }
    if g == 1.0 {
        return Ok(img.clone());
    }
    let exponent = 1.0 / g;
    Ok(img.map(|p| p.powf(exponent).clamp(0.0, 1.0)))
}

pub fn negate(img: &GrayImage) -> GrayImage {
    img.map(|p| 1.0 - p)
}

/// Draws one γ uniformly from `range`.
///
/// The draw is `min + (max - min) * u` with `u = (next_u64() >> 11) * 2^-53`,
/// so any generator producing the same 64-bit stream yields the same γ.
pub fn sample_gamma(range: &GammaRange, rng: &mut impl RngCore) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    (range.min + (range.max - range.min) * u).clamp(range.min, range.max)
}

/// Grayscale conversion followed by a per-image random gamma.
///
/// Returns the augmented image and the γ that was applied.
pub fn augment_image(img: &RgbImage, cfg: &AugmentConfig, rng: &mut impl RngCore) -> Result<(GrayImage, f64)> {
    cfg.validate()?;
    let gray = rgb_to_gray(img, &cfg.gray_coefficients);
    let gamma = sample_gamma(&cfg.gamma_range, rng);
    Ok((gamma_correct(&gray, gamma)?, gamma))
}

/// Deterministic generator for the `index`-th image of an augmentation run.
///
/// ChaCha8 keyed by `seed`, with `index` selecting the stream, so images can
/// be processed in any order or in parallel.
pub fn image_rng(seed: u64, index: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One crop for mask-classifier training.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskCrop {
    pub image: GrayImage,
    pub mask: bool,
    pub negative: bool,
}

/// Cuts every annotated face out of an augmented image, adding the negative
/// of each crop when `emit_negatives` is set.
pub fn mask_training_crops(
    img: &GrayImage,
    records: &[GroundTruthRecord],
    emit_negatives: bool,
) -> Result<Vec<MaskCrop>> {
    let mut crops = Vec::new();
    for rec in records {
        let crop = img.crop(
            rec.x_min as usize,
            rec.y_min as usize,
            rec.x_max as usize,
            rec.y_max as usize,
        )?;
        if emit_negatives {
            crops.push(MaskCrop {
                image: crop.clone(),
                mask: rec.mask,
                negative: false,
            });
            crops.push(MaskCrop {
                image: negate(&crop),
                mask: rec.mask,
                negative: true,
            });
        } else {
            crops.push(MaskCrop {
                image: crop,
                mask: rec.mask,
                negative: false,
            });
        }
    }
    Ok(crops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(img: &RgbImage) -> f64 {
        rgb_to_gray(img, &GrayCoefficients::PUBLISHED).pixels()[0]
    }

    #[test]
    fn gray_conversion_examples() {
        assert_eq!(px(&RgbImage::filled(1, 1, [0.0, 0.0, 0.0]).unwrap()), 0.0);
        assert!((px(&RgbImage::filled(1, 1, [1.0, 0.0, 0.0]).unwrap()) - 0.229).abs() < 1e-12);
        assert!((px(&RgbImage::filled(1, 1, [1.0, 1.0, 1.0]).unwrap()) - 0.930).abs() < 1e-12);
    }

    #[test]
    fn gray_conversion_clamps_heavy_weights() {
        let img = RgbImage::filled(1, 1, [1.0, 1.0, 1.0]).unwrap();
        let heavy = GrayCoefficients { r: 1.0, g: 1.0, b: 1.0 };
        assert_eq!(rgb_to_gray(&img, &heavy).pixels()[0], 1.0);
    }

    #[test]
    fn gamma_examples() {
        let img = GrayImage::new(3, 1, vec![0.25, 0.0, 1.0]).unwrap();
        let out = gamma_correct(&img, 0.5).unwrap();
        assert!((out.pixels()[0] - 0.0625).abs() < 1e-12);
        assert_eq!(out.pixels()[1], 0.0);
        assert_eq!(out.pixels()[2], 1.0);
        assert_eq!(gamma_correct(&img, 1.0).unwrap(), img);
    }

    #[test]
    fn gamma_rejects_non_positive() {
        let img = GrayImage::filled(1, 1, 0.5).unwrap();
        assert!(gamma_correct(&img, 0.0).is_err());
        assert!(gamma_correct(&img, -1.0).is_err());
        assert!(gamma_correct(&img, f64::NAN).is_err());
    }

    #[test]
    fn negate_examples() {
        let img = GrayImage::new(2, 1, vec![0.0, 0.75]).unwrap();
        assert_eq!(negate(&img).pixels(), &[1.0, 0.25]);
    }

    #[test]
    fn augment_is_reproducible_and_keeps_black() {
        let cfg = AugmentConfig::default();
        let img = RgbImage::filled(4, 4, [0.3, 0.6, 0.9]).unwrap();
        let a = augment_image(&img, &cfg, &mut image_rng(9, 0)).unwrap();
        let b = augment_image(&img, &cfg, &mut image_rng(9, 0)).unwrap();
        assert_eq!(a, b);
        assert!(cfg.gamma_range.contains(a.1));

        let black = RgbImage::filled(4, 4, [0.0; 3]).unwrap();
        let (out, _) = augment_image(&black, &cfg, &mut image_rng(9, 1)).unwrap();
        assert!(out.pixels().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn bad_gamma_range_rejected() {
        assert!(GammaRange::new(0.0, 0.9).is_err());
        assert!(GammaRange::new(0.9, 0.3).is_err());
        assert!(GammaRange::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn crops_with_negatives() {
        let img = GrayImage::new(4, 2, vec![0.0, 0.25, 0.5, 0.75, 1.0, 0.5, 0.25, 0.0]).unwrap();
        let rec = GroundTruthRecord::new("a.png", 1, 0, 3, 2, true).unwrap();
        let crops = mask_training_crops(&img, std::slice::from_ref(&rec), true).unwrap();
        assert_eq!(crops.len(), 2);
        assert_eq!(crops[0].image.pixels(), &[0.25, 0.5, 0.5, 0.25]);
        assert_eq!(crops[1].image.pixels(), &[0.75, 0.5, 0.5, 0.75]);
        assert!(crops[1].negative && crops[1].mask);
        assert_eq!(mask_training_crops(&img, &[rec], false).unwrap().len(), 1);
    }
}
