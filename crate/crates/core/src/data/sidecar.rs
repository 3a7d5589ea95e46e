//! Radiometric persistence.
//!
//! A `.temps` sidecar next to an image holds the frame's temperatures
//! losslessly: `u32` width, `u32` height, then `width * height` `f32`
//! values in °C, row-major, all little-endian. Images without a sidecar
//! fall back to mapping 8-bit gray levels affinely onto a temperature band.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::detect::TempBand;
use crate::radiometric::ThermalFrame;
use crate::{Error, Result};

pub const SIDECAR_EXTENSION: &str = "temps";

/// `frame_0001.png` → `frame_0001.temps`.
pub fn sidecar_path(image_path: &Path) -> PathBuf {
    image_path.with_extension(SIDECAR_EXTENSION)
}

pub fn encode_sidecar(frame: &ThermalFrame, mut out: impl Write) -> Result<()> {
    let mut buf = Vec::with_capacity(8 + 4 * frame.temps().len());
    buf.extend_from_slice(&(frame.width() as u32).to_le_bytes());
    buf.extend_from_slice(&(frame.height() as u32).to_le_bytes());
    for t in frame.temps() {
        buf.extend_from_slice(&t.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn decode_sidecar(bytes: &[u8]) -> Result<ThermalFrame> {
    if bytes.len() < 8 {
        return Err(Error::InvalidFrame("sidecar shorter than its 8-byte header".into()));
    }
    let width = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let body = &bytes[8..];
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::InvalidFrame("sidecar dimensions overflow".into()))?;
    if body.len() != expected {
        return Err(Error::InvalidFrame(format!(
            "sidecar declares {width}x{height} ({expected} bytes) but holds {} bytes",
            body.len()
        )));
    }
    let temps = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ThermalFrame::new(0, width, height, temps)
}

pub fn save_sidecar(frame: &ThermalFrame, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    encode_sidecar(frame, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_sidecar(path: &Path) -> Result<ThermalFrame> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    decode_sidecar(&bytes).map_err(|e| Error::InvalidFrame(format!("{}: {e}", path.display())))
}

/// Gray level to temperature: 0 → `band.min`, 255 → `band.max`.
pub fn byte_to_temp(byte: u8, band: &TempBand) -> f32 {
    (band.min + (band.max - band.min) * f64::from(byte) / 255.0) as f32
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOptions {
    /// Temperature band for images that have no sidecar.
    pub fallback_band: TempBand,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            fallback_band: TempBand::new(20.0, 45.0),
        }
    }
}

/// Loads a frame from an image path (or directly from a `.temps` path).
///
/// An adjacent sidecar is authoritative; when the raster also exists its
/// dimensions must agree with the sidecar. Without a sidecar the raster is
/// read as 8-bit gray and mapped onto `fallback_band`.
pub fn load_thermal_frame(image_path: &Path, opts: &LoadOptions) -> Result<ThermalFrame> {
    let is_sidecar = image_path.extension().is_some_and(|e| e == SIDECAR_EXTENSION);
    let sidecar = if is_sidecar {
        image_path.to_path_buf()
    } else {
        sidecar_path(image_path)
    };

    if sidecar.is_file() {
        let frame = read_sidecar(&sidecar)?;
        if !is_sidecar && image_path.is_file() {
            let (w, h) = image::image_dimensions(image_path).map_err(|e| Error::Image {
                path: image_path.into(),
                source: e,
            })?;
            if (w as usize, h as usize) != (frame.width(), frame.height()) {
                return Err(Error::InvalidFrame(format!(
                    "{}: raster is {w}x{h} but sidecar is {}x{}",
                    image_path.display(),
                    frame.width(),
                    frame.height()
                )));
            }
        }
        return Ok(frame);
    }

    if is_sidecar || !image_path.is_file() {
        return Err(Error::Dataset(format!(
            "{}: neither a radiometric sidecar nor a raster image found",
            image_path.display()
        )));
    }
    let img = image::open(image_path)
        .map_err(|e| Error::Image {
            path: image_path.into(),
            source: e,
        })?
        .into_luma8();
    let temps = img
        .as_raw()
        .iter()
        .map(|&b| byte_to_temp(b, &opts.fallback_band))
        .collect();
    ThermalFrame::new(0, img.width() as usize, img.height() as usize, temps)
}
