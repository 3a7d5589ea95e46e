use serde::{Deserialize, Serialize};

use crate::detect::{BoundingBox, Detection};

/// Intersection over union of two boxes; 0 when they are disjoint.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let iw = (a.x_max.min(b.x_max) - a.x_min.max(b.x_min)).max(0.0);
    let ih = (a.y_max.min(b.y_max) - a.y_min.max(b.y_min)).max(0.0);
    let inter = iw * ih;
    if inter <= 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match {
    /// Index into the detection slice.
    pub detection: usize,
    /// Index into the ground-truth slice.
    pub ground_truth: usize,
    pub iou: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matching {
    pub matches: Vec<Match>,
    pub unmatched_detections: Vec<usize>,
    pub unmatched_ground_truth: Vec<usize>,
}

impl Matching {
    pub fn true_positives(&self) -> usize {
        self.matches.len()
    }

    pub fn false_positives(&self) -> usize {
        self.unmatched_detections.len()
    }

    pub fn false_negatives(&self) -> usize {
        self.unmatched_ground_truth.len()
    }

    pub fn is_true_positive(&self, detection: usize) -> bool {
        self.matches.iter().any(|m| m.detection == detection)
    }
}

/// Detection indices by descending confidence; equal confidences keep input order.
pub fn confidence_order(dets: &[Detection]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].confidence.total_cmp(&dets[a].confidence));
    order
}

/// Greedy single-image matching.
///
/// Detections are visited by descending confidence. Each one takes the still
/// unmatched ground truth with the highest IOU, provided that IOU reaches
/// `iou_threshold`; ties go to the lower ground-truth index.
pub fn match_detections(dets: &[Detection], gts: &[BoundingBox], iou_threshold: f64) -> Matching {
    let mut taken = vec![false; gts.len()];
    let mut out = Matching::default();
    for d in confidence_order(dets) {
        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in gts.iter().enumerate() {
            if taken[g] {
                continue;
            }
            let overlap = iou(&dets[d].bbox, gt);
            if overlap >= iou_threshold && best.is_none_or(|(_, b)| overlap > b) {
                best = Some((g, overlap));
            }
        }
        match best {
            Some((g, overlap)) => {
                taken[g] = true;
                out.matches.push(Match {
                    detection: d,
                    ground_truth: g,
                    iou: overlap,
                });
            }
            None => out.unmatched_detections.push(d),
        }
    }
    out.unmatched_ground_truth = (0..gts.len()).filter(|&g| !taken[g]).collect();
    out
}

/// Mean IOU over matched pairs; 0 when there are none.
pub fn mean_iou(matches: &[Match]) -> f64 {
    if matches.is_empty() {
        0.0
    } else {
        matches.iter().map(|m| m.iou).sum::<f64>() / matches.len() as f64
    }
}
