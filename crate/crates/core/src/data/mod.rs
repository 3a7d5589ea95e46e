//! Annotation files, radiometric persistence and synthetic data.

mod dataset;
mod ground_truth;
mod manifest;
mod sidecar;
mod synthetic;

pub use dataset::{
    generate_synthetic_dataset, plan_synthetic_dataset, synthetic_image_name, write_planned_dataset, Dataset,
    DatasetSummary, PlannedFrame, ScenarioMix, AFEBRILE_PEAK_RANGE, FEBRILE_PEAK_RANGE, SYNTHETIC_EPOCH_MS,
    SYNTHETIC_FRAME_INTERVAL_MS,
};
pub use ground_truth::{
    find_ground_truth, parse_ground_truth, read_ground_truth, save_ground_truth, write_ground_truth, GroundTruthRecord,
    GROUND_TRUTH_FILE, GROUND_TRUTH_FILE_ALT,
};
pub use manifest::{parse_manifest, read_manifest, write_manifest, ManifestEntry, MANIFEST_FILE};
pub use sidecar::{
    byte_to_temp, decode_sidecar, encode_sidecar, load_thermal_frame, read_sidecar, save_sidecar, sidecar_path,
    LoadOptions, SIDECAR_EXTENSION,
};
pub use synthetic::{generate_synthetic_frame, SyntheticFace, SyntheticSceneConfig, DEFAULT_MASK_OFFSET};
