//! Single-channel images with intensities in `[0, 1]`.

use crate::{Error, Result};

/// Row-major single-channel image whose pixels all lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

/// Output of temperature normalization.
pub type NormalizedImage = UnitImage;

/// Output of the color-to-thermal augmentation.
pub type GrayImage = UnitImage;

impl UnitImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(bad) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidImage(format!("pixel {bad} outside [0, 1]")));
        }
        Ok(Self { width, height, pixels })
    }

    /// Constructor for internal producers that guarantee the range invariant.
    pub(crate) fn from_unit_pixels(width: usize, height: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), width * height);
        debug_assert!(pixels.iter().all(|p| (0.0..=1.0).contains(p)));
        Self { width, height, pixels }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    /// Applies `f` to every pixel. `f` must map `[0, 1]` into `[0, 1]`.
    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_unit_pixels(self.width, self.height, self.pixels.iter().map(|&p| f(p)).collect())
    }

    /// Copies out the half-open pixel rectangle `[x0, x1) x [y0, y1)`.
    pub fn crop(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> Result<Self> {
        if x0 >= x1 || y0 >= y1 || x1 > self.width || y1 > self.height {
            return Err(Error::InvalidImage(format!(
                "crop [{x0},{x1})x[{y0},{y1}) outside {}x{} image",
                self.width, self.height
            )));
        }
        let pixels = (y0..y1)
            .flat_map(|y| self.pixels[y * self.width + x0..y * self.width + x1].iter().copied())
            .collect();
        Ok(Self::from_unit_pixels(x1 - x0, y1 - y0, pixels))
    }

    /// 8-bit export with round-half-up quantization: `byte = floor(p * 255 + 0.5)`.
    pub fn to_bytes(&self) -> image::GrayImage {
        let data = self.pixels.iter().map(|&p| unit_to_byte(p)).collect();
        image::GrayImage::from_raw(self.width as u32, self.height as u32, data)
            .expect("buffer length matches dimensions")
    }

    pub fn from_bytes(img: &image::GrayImage) -> Self {
        let pixels = img.as_raw().iter().map(|&b| f64::from(b) / 255.0).collect();
        Self::from_unit_pixels(img.width() as usize, img.height() as usize, pixels)
    }
}

pub(crate) fn unit_to_byte(p: f64) -> u8 {
    (p * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
}
