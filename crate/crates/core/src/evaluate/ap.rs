use serde::{Deserialize, Serialize};

use super::matching::{confidence_order, match_detections};
use crate::detect::{BoundingBox, Detection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApMethod {
    /// Exact area under the interpolated precision envelope.
    #[default]
    AllPoints,
    /// Mean interpolated precision at recall 0, 0.1, ..., 1.
    ElevenPoint,
}

impl std::str::FromStr for ApMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "all-points" | "all_points" => Ok(Self::AllPoints),
            "11-point" | "eleven_point" => Ok(Self::ElevenPoint),
            other => Err(crate::Error::InvalidConfig(format!(
                "unknown AP method {other:?} (expected all-points or 11-point)"
            ))),
        }
    }
}

/// AP from detections already ranked by descending confidence, each flagged
/// true or false positive, against `num_ground_truth` objects.
///
/// Returns 0 when there is no ground truth.
pub fn ap_from_ranked(is_tp: &[bool], num_ground_truth: usize, method: ApMethod) -> f64 {
    if num_ground_truth == 0 {
        return 0.0;
    }
    let n_gt = num_ground_truth as f64;
    let mut recall = Vec::with_capacity(is_tp.len());
    let mut precision = Vec::with_capacity(is_tp.len());
    let mut tp = 0usize;
    for (k, &hit) in is_tp.iter().enumerate() {
        tp += usize::from(hit);
        recall.push(tp as f64 / n_gt);
        precision.push(tp as f64 / (k + 1) as f64);
    }

    // Precision envelope: best precision at this rank or any later one.
    let mut envelope = precision.clone();
    for k in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[k] = envelope[k].max(envelope[k + 1]);
    }

    let ap = match method {
        ApMethod::AllPoints => {
            let mut area = 0.0;
            let mut prev_recall = 0.0;
            for (r, p) in recall.iter().zip(&envelope) {
                if *r > prev_recall {
                    area += (r - prev_recall) * p;
                    prev_recall = *r;
                }
            }
            area
        }
        ApMethod::ElevenPoint => {
            (0..=10)
                .map(|i| {
                    let level = i as f64 / 10.0;
                    recall
                        .iter()
                        .zip(&envelope)
                        .find(|(r, _)| **r >= level - 1e-12)
                        .map_or(0.0, |(_, p)| *p)
                })
                .sum::<f64>()
                / 11.0
        }
    };
    ap.clamp(0.0, 1.0)
}

/// Single-class AP over several images.
///
/// Each image is matched independently; detections from all images are then
/// ranked together by descending confidence, ties resolved by image order and
/// then by within-image rank.
pub fn average_precision_multi<'a>(
    images: impl IntoIterator<Item = (&'a [Detection], &'a [BoundingBox])>,
    iou_threshold: f64,
    method: ApMethod,
) -> f64 {
    let mut ranked: Vec<(f64, bool)> = Vec::new();
    let mut n_gt = 0;
    for (dets, gts) in images {
        let matching = match_detections(dets, gts, iou_threshold);
        n_gt += gts.len();
        for d in confidence_order(dets) {
            ranked.push((dets[d].confidence, matching.is_true_positive(d)));
        }
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    let flags: Vec<bool> = ranked.into_iter().map(|(_, tp)| tp).collect();
    ap_from_ranked(&flags, n_gt, method)
}

/// Single-image all-points AP.
pub fn average_precision(dets: &[Detection], gts: &[BoundingBox], iou_threshold: f64) -> f64 {
    average_precision_multi([(dets, gts)], iou_threshold, ApMethod::AllPoints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(ap_from_ranked(&[true], 1, ApMethod::AllPoints), 1.0);
        assert_eq!(ap_from_ranked(&[], 1, ApMethod::AllPoints), 0.0);
        let ap = ap_from_ranked(&[true, false, true], 2, ApMethod::AllPoints);
        assert!((ap - (0.5 + 0.5 * 2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(ap_from_ranked(&[true], 0, ApMethod::AllPoints), 0.0);
    }

    #[test]
    fn eleven_point() {
        assert_eq!(ap_from_ranked(&[true], 1, ApMethod::ElevenPoint), 1.0);
        // Recall 0.5 at precision 1, recall 1 at 2/3: 6 levels at 1, 5 at 2/3.
        let ap = ap_from_ranked(&[true, false, true], 2, ApMethod::ElevenPoint);
        assert!((ap - (6.0 + 5.0 * 2.0 / 3.0) / 11.0).abs() < 1e-12);
    }

    #[test]
    fn single_image_helper() {
        let gt = BoundingBox::new(0.0, 0.0, 10.0, 10.0).unwrap();
        let det = Detection::new(0, gt, 0.9).unwrap();
        assert_eq!(average_precision(&[det], &[gt], 0.5), 1.0);
        assert_eq!(average_precision(&[], &[gt], 0.5), 0.0);
    }
}
