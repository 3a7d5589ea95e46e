//! Thermal-camera screening for fever and face masks.
//!
//! The crate works on radiometric frames, where every pixel is a calibrated
//! temperature in °C. The processing chain is:
//!
//! 1. [`radiometric`]: frame model and temperature-constrained normalization
//!    to a `[0, 1]` image that keeps facial contrast when very hot or very
//!    cold objects share the scene.
//! 2. [`detect`]: a warm-region baseline face detector, plus the line-oriented
//!    adapter through which externally trained detectors feed the pipeline.
//! 3. [`screen`]: per-person maximum face temperature, fever decision and the
//!    cold-lower-face mask heuristic.
//! 4. [`pipeline`]: ordered, parallel frame streaming that emits one event
//!    per frame.
//!
//! Alongside the chain, [`augment`] turns color images into thermal-looking
//! grayscale training data, [`evaluate`] computes IOU / AP / precision /
//! recall with lux-bucket grouping, and [`data`] handles the annotation
//! format, radiometric sidecars and the seeded synthetic scene generator
//! used as a test oracle.

pub mod augment;
pub mod cli;
pub mod data;
pub mod detect;
mod error;
pub mod evaluate;
pub mod pipeline;
pub mod radiometric;
pub mod raster;
pub mod screen;

pub use error::{Error, Result};
