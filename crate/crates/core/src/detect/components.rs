use super::PixelRect;
use crate::radiometric::ThermalFrame;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height, "mask size mismatch");
        Self { width, height, bits }
    }

    /// Parses rows of `#` (set) and `.` (clear); handy for tests.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let bits = rows.iter().flat_map(|r| r.chars().map(|c| c == '#')).collect();
        Self::new(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Marks pixels whose temperature lies in the closed interval `[lo, hi]`.
pub fn threshold_body_band(frame: &ThermalFrame, lo: f64, hi: f64) -> BinaryMask {
    let bits = frame
        .temps()
        .iter()
        .map(|&t| {
            let t = f64::from(t);
            t >= lo && t <= hi
        })
        .collect();
    BinaryMask::new(frame.width(), frame.height(), bits)
}

/// An 8-connected set of mask pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub bbox: PixelRect,
    pub area: usize,
}

/// Labels 8-connected components, returned ordered by `(y0, x0)` of their
/// tight bounding boxes.
pub fn connected_components(mask: &BinaryMask) -> Vec<Region> {
    let (w, h) = (mask.width, mask.height);
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    let mut regions = Vec::new();

    for start in 0..w * h {
        if !mask.bits[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let (sx, sy) = (start % w, start / w);
        let mut rect = PixelRect {
            x0: sx,
            y0: sy,
            x1: sx + 1,
            y1: sy + 1,
        };
        let mut area = 0;

        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            area += 1;
            rect.x0 = rect.x0.min(x);
            rect.x1 = rect.x1.max(x + 1);
            rect.y0 = rect.y0.min(y);
            rect.y1 = rect.y1.max(y + 1);

            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let n = ny * w + nx;
                    if mask.bits[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        regions.push(Region { bbox: rect, area });
    }

    regions.sort_by_key(|r| (r.bbox.y0, r.bbox.x0));
    regions
}
