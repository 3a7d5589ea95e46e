//! Dataset directories.
//!
//! Layout: images plus `ground_truth.txt` in one folder, a `.temps` sidecar
//! next to every image, and `manifest.txt` listing `image_name lux timestamp`
//! per frame. Frame ids are manifest line indices.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::ground_truth::{
    find_ground_truth, read_ground_truth, save_ground_truth, GroundTruthRecord, GROUND_TRUTH_FILE,
};
use super::manifest::{read_manifest, write_manifest, ManifestEntry, MANIFEST_FILE};
use super::sidecar::{load_thermal_frame, save_sidecar, sidecar_path, LoadOptions};
use super::synthetic::{generate_synthetic_frame, SyntheticFace, SyntheticSceneConfig};
use crate::augment::image_rng;
use crate::evaluate::LuxBucket;
use crate::radiometric::{normalize_frame, NormalizationConfig, ThermalFrame};
use crate::{Error, Result};

/// Capture time of frame 0 in generated datasets (ms since epoch).
pub const SYNTHETIC_EPOCH_MS: u64 = 1_600_000_000_000;
/// Frame spacing at the 9 Hz capture rate, rounded to whole milliseconds.
pub const SYNTHETIC_FRAME_INTERVAL_MS: u64 = 111;

/// Face peak ranges. Both stay at least 0.5 °C away from the 37.5 °C threshold.
pub const FEBRILE_PEAK_RANGE: (f64, f64) = (38.0, 39.0);
pub const AFEBRILE_PEAK_RANGE: (f64, f64) = (36.4, 37.0);

/// How often generated faces are febrile and masked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioMix {
    pub fever_rate: f64,
    pub mask_rate: f64,
}

impl ScenarioMix {
    pub const MIXED: Self = Self {
        fever_rate: 0.3,
        mask_rate: 0.5,
    };
    pub const ALL_FEBRILE: Self = Self {
        fever_rate: 1.0,
        mask_rate: 0.5,
    };
    pub const ALL_MASKED: Self = Self {
        fever_rate: 0.3,
        mask_rate: 1.0,
    };
    /// Afebrile and masked: a scene that should raise no alerts.
    pub const HEALTHY: Self = Self {
        fever_rate: 0.0,
        mask_rate: 1.0,
    };
}

impl std::str::FromStr for ScenarioMix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed" => Ok(Self::MIXED),
            "all-febrile" => Ok(Self::ALL_FEBRILE),
            "all-masked" => Ok(Self::ALL_MASKED),
            "healthy" => Ok(Self::HEALTHY),
            other => Err(Error::InvalidConfig(format!(
                "unknown scenario {other:?} (expected mixed, all-febrile, all-masked or healthy)"
            ))),
        }
    }
}

/// One planned frame of a synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedFrame {
    pub scene: SyntheticSceneConfig,
    pub lux: f64,
    pub timestamp: u64,
}

impl PlannedFrame {
    pub fn manifest_entry(&self) -> ManifestEntry {
        ManifestEntry {
            image_name: self.scene.image_name.clone(),
            lux: Some(self.lux),
            timestamp: Some(self.timestamp),
        }
    }
}

pub fn synthetic_image_name(index: usize) -> String {
    format!("frame_{index:05}.png")
}

fn uniform(rng: &mut impl RngCore, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Places up to `count` non-interacting faces. Boxes keep a gap of at least
/// one radius between each other and 2 px from the frame border.
fn place_faces(
    rng: &mut impl RngCore,
    width: usize,
    height: usize,
    count: usize,
    mix: &ScenarioMix,
) -> Vec<SyntheticFace> {
    let mut faces: Vec<SyntheticFace> = Vec::new();
    for _ in 0..count {
        for _attempt in 0..200 {
            let rx = rng.random_range(12..=18) as f64;
            let ry = (rx * 1.25).round();
            let margin = 2.0;
            let cx_range = (rx + margin, width as f64 - rx - margin - 1.0);
            let cy_range = (ry + margin, height as f64 - ry - margin - 1.0);
            if cx_range.0 >= cx_range.1 || cy_range.0 >= cy_range.1 {
                break;
            }
            let cx = uniform(rng, cx_range).round();
            let cy = uniform(rng, cy_range).round();
            let fits = faces.iter().all(|f| {
                let sep = rx.max(ry).max(f.radii.0).max(f.radii.1);
                (cx - f.center.0).abs() > rx + f.radii.0 + sep || (cy - f.center.1).abs() > ry + f.radii.1 + sep
            });
            if !fits {
                continue;
            }
            let febrile = rng.random::<f64>() < mix.fever_rate;
            let masked = rng.random::<f64>() < mix.mask_rate;
            let peak = uniform(
                rng,
                if febrile {
                    FEBRILE_PEAK_RANGE
                } else {
                    AFEBRILE_PEAK_RANGE
                },
            );
            faces.push(SyntheticFace::new((cx, cy), (rx, ry), peak).with_mask(masked));
            break;
        }
    }
    faces
}

/// Plans `n` frames of 1 to 5 faces each. Lux labels cycle through the four
/// buckets; timestamps advance at the capture rate.
pub fn plan_synthetic_dataset(n: usize, mix: &ScenarioMix, seed: u64, noise_sigma: f64) -> Vec<PlannedFrame> {
    (0..n)
        .map(|i| {
            let mut rng = image_rng(seed, i as u64);
            let count = rng.random_range(1..=5);
            let base = SyntheticSceneConfig::default();
            let faces = place_faces(&mut rng, base.width, base.height, count, mix);
            PlannedFrame {
                scene: SyntheticSceneConfig {
                    faces,
                    noise_sigma,
                    seed: rng.next_u64(),
                    frame_id: i as u64,
                    image_name: synthetic_image_name(i),
                    ..base
                },
                lux: LuxBucket::ALL[i % 4].representative(),
                timestamp: SYNTHETIC_EPOCH_MS + i as u64 * SYNTHETIC_FRAME_INTERVAL_MS,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSummary {
    pub frames: usize,
    pub faces: usize,
}

/// Renders planned frames into `out_dir`: an 8-bit normalized PNG and a
/// `.temps` sidecar per frame, then `ground_truth.txt` and `manifest.txt`.
pub fn write_planned_dataset(plan: &[PlannedFrame], out_dir: &Path) -> Result<DatasetSummary> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let norm = NormalizationConfig::default();

    let per_frame: Vec<Vec<GroundTruthRecord>> = plan
        .par_iter()
        .map(|p| -> Result<Vec<GroundTruthRecord>> {
            let (frame, annotations) = generate_synthetic_frame(&p.scene)?;
            let image_path = out_dir.join(&p.scene.image_name);
            save_sidecar(&frame, &sidecar_path(&image_path))?;
            normalize_frame(&frame, &norm)?
                .to_bytes()
                .save(&image_path)
                .map_err(|e| Error::Image {
                    path: image_path.clone(),
                    source: e,
                })?;
            annotations.iter().map(GroundTruthRecord::from_annotation).collect()
        })
        .collect::<Result<_>>()?;

    let records: Vec<GroundTruthRecord> = per_frame.into_iter().flatten().collect();
    save_ground_truth(&records, &out_dir.join(GROUND_TRUTH_FILE))?;

    let manifest: Vec<ManifestEntry> = plan.iter().map(PlannedFrame::manifest_entry).collect();
    let manifest_path = out_dir.join(MANIFEST_FILE);
    let file = std::fs::File::create(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    write_manifest(&manifest, std::io::BufWriter::new(file))?;

    Ok(DatasetSummary {
        frames: plan.len(),
        faces: records.len(),
    })
}

pub fn generate_synthetic_dataset(
    n: usize,
    mix: &ScenarioMix,
    seed: u64,
    noise_sigma: f64,
    out_dir: &Path,
) -> Result<DatasetSummary> {
    if n == 0 {
        return Err(Error::InvalidConfig("dataset size must be positive".into()));
    }
    write_planned_dataset(&plan_synthetic_dataset(n, mix, seed, noise_sigma), out_dir)
}

/// A dataset directory opened for reading.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub dir: PathBuf,
    pub manifest: Vec<ManifestEntry>,
}

impl Dataset {
    pub fn open(dir: &Path) -> Result<Self> {
        let manifest_path = dir.join(MANIFEST_FILE);
        if !manifest_path.is_file() {
            return Err(Error::Dataset(format!("no {MANIFEST_FILE} in {}", dir.display())));
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: read_manifest(&manifest_path)?,
        })
    }

    pub fn image_path(&self, entry: &ManifestEntry) -> PathBuf {
        self.dir.join(&entry.image_name)
    }

    /// Loads frame `index` with its manifest metadata attached.
    pub fn load_frame(&self, index: usize, opts: &LoadOptions) -> Result<ThermalFrame> {
        let entry = &self.manifest[index];
        Ok(load_thermal_frame(&self.image_path(entry), opts)?
            .with_frame_id(index as u64)
            .with_timestamp(entry.timestamp.unwrap_or(0))
            .with_lux(entry.lux))
    }

    pub fn ground_truth(&self) -> Result<Vec<GroundTruthRecord>> {
        read_ground_truth(&find_ground_truth(&self.dir)?)
    }

    /// Ground truth grouped by image name.
    pub fn ground_truth_by_image(&self) -> Result<BTreeMap<String, Vec<GroundTruthRecord>>> {
        let mut map: BTreeMap<String, Vec<GroundTruthRecord>> = BTreeMap::new();
        for r in self.ground_truth()? {
            map.entry(r.image_name.clone()).or_default().push(r);
        }
        Ok(map)
    }
}
