//! Detection and mask-classification metrics.
//!
//! Single-class (face) evaluation: IOU matching, AP (which equals mAP with
//! one class), mean IOU over matches, precision and recall, optionally broken
//! down by lux bucket. Undefined ratios (0/0) are reported as 0 together
//! with a `*_defined: false` flag so reports stay serializable.

mod ap;
mod lux;
mod matching;
mod split;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detect::{BoundingBox, Detection};
use crate::screen::PersonScreeningResult;

pub use ap::{ap_from_ranked, average_precision, average_precision_multi, ApMethod};
pub use lux::{bucket_by_lux, LuxBucket, LuxGroups};
pub use matching::{confidence_order, iou, match_detections, mean_iou, Match, Matching};
pub use split::{split_by_timestamp, Split, Timestamped};

/// One labelled face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub image_name: String,
    pub bbox: BoundingBox,
    pub mask: bool,
    pub lux: Option<f64>,
    /// Milliseconds since the Unix epoch.
    pub timestamp: Option<u64>,
}

impl Timestamped for Annotation {
    fn timestamp(&self) -> Option<u64> {
        self.timestamp
    }

    fn name(&self) -> &str {
        &self.image_name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
    pub precision_defined: bool,
    pub recall_defined: bool,
}

fn ratio(num: usize, den: usize) -> (f64, bool) {
    if den == 0 {
        (0.0, false)
    } else {
        (num as f64 / den as f64, true)
    }
}

pub fn precision_recall(tp: usize, fp: usize, fn_: usize) -> PrecisionRecall {
    let (precision, precision_defined) = ratio(tp, tp + fp);
    let (recall, recall_defined) = ratio(tp, tp + fn_);
    PrecisionRecall {
        precision,
        recall,
        precision_defined,
        recall_defined,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub iou_threshold: f64,
    pub ap_method: ApMethod,
    /// Detections below this confidence are ignored for precision / recall
    /// (AP always uses every detection).
    pub score_threshold: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            iou_threshold: 0.5,
            ap_method: ApMethod::AllPoints,
            score_threshold: 0.0,
        }
    }
}

/// Ground truth, detections and (optionally) screening verdicts for one image.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalImage {
    pub name: String,
    pub lux: Option<f64>,
    pub ground_truth: Vec<(BoundingBox, bool)>,
    pub detections: Vec<Detection>,
    pub screened: Vec<PersonScreeningResult>,
}

/// Mask classification quality, masked being the positive class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskReport {
    pub matched: usize,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub accuracy: f64,
    pub accuracy_defined: bool,
    pub precision: f64,
    pub recall: f64,
    pub precision_defined: bool,
    pub recall_defined: bool,
    pub unmatched_predictions: usize,
    pub unmatched_ground_truth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuxRow {
    pub bucket: LuxBucket,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuxReport {
    /// Always four rows, one per bucket, in ascending illumination.
    pub rows: Vec<LuxRow>,
    pub unbucketed: Option<Box<EvalReport>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub images: usize,
    pub ground_truth: usize,
    pub detections: usize,
    pub iou_threshold: f64,
    pub mean_iou: f64,
    pub map: f64,
    pub precision: f64,
    pub recall: f64,
    pub precision_defined: bool,
    pub recall_defined: bool,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mask: Option<MaskReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub by_lux: Option<LuxReport>,
}

fn mask_report(images: &[&EvalImage], iou_threshold: f64) -> Option<MaskReport> {
    if images.iter().all(|img| img.screened.is_empty()) {
        return None;
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    let (mut unmatched_predictions, mut unmatched_ground_truth) = (0, 0);
    for img in images {
        // Verdicts carry no confidence: match them in input order.
        let as_dets: Vec<Detection> = img
            .screened
            .iter()
            .map(|r| Detection {
                frame_id: r.frame_id,
                bbox: r.bbox,
                confidence: 1.0,
            })
            .collect();
        let gt_boxes: Vec<BoundingBox> = img.ground_truth.iter().map(|(b, _)| *b).collect();
        let m = match_detections(&as_dets, &gt_boxes, iou_threshold);
        for pair in &m.matches {
            let predicted = img.screened[pair.detection].mask;
            let actual = img.ground_truth[pair.ground_truth].1;
            match (predicted, actual) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, false) => tn += 1,
                (false, true) => fn_ += 1,
            }
        }
        unmatched_predictions += m.false_positives();
        unmatched_ground_truth += m.false_negatives();
    }
    let matched = tp + fp + tn + fn_;
    let (accuracy, accuracy_defined) = ratio(tp + tn, matched);
    let pr = precision_recall(tp, fp, fn_);
    Some(MaskReport {
        matched,
        tp,
        fp,
        tn,
        fn_,
        accuracy,
        accuracy_defined,
        precision: pr.precision,
        recall: pr.recall,
        precision_defined: pr.precision_defined,
        recall_defined: pr.recall_defined,
        unmatched_predictions,
        unmatched_ground_truth,
    })
}

fn report_for(images: &[&EvalImage], cfg: &EvalConfig) -> EvalReport {
    let gt_boxes: Vec<Vec<BoundingBox>> = images
        .iter()
        .map(|img| img.ground_truth.iter().map(|(b, _)| *b).collect())
        .collect();

    let map = average_precision_multi(
        images
            .iter()
            .zip(&gt_boxes)
            .map(|(img, gts)| (img.detections.as_slice(), gts.as_slice())),
        cfg.iou_threshold,
        cfg.ap_method,
    );

    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    let mut matches = Vec::new();
    for (img, gts) in images.iter().zip(&gt_boxes) {
        let kept: Vec<Detection> = img
            .detections
            .iter()
            .filter(|d| d.confidence >= cfg.score_threshold)
            .copied()
            .collect();
        let m = match_detections(&kept, gts, cfg.iou_threshold);
        tp += m.true_positives();
        fp += m.false_positives();
        fn_ += m.false_negatives();
        matches.extend(m.matches);
    }
    let pr = precision_recall(tp, fp, fn_);

    EvalReport {
        images: images.len(),
        ground_truth: gt_boxes.iter().map(Vec::len).sum(),
        detections: images.iter().map(|i| i.detections.len()).sum(),
        iou_threshold: cfg.iou_threshold,
        mean_iou: mean_iou(&matches),
        map,
        precision: pr.precision,
        recall: pr.recall,
        precision_defined: pr.precision_defined,
        recall_defined: pr.recall_defined,
        tp,
        fp,
        fn_,
        mask: mask_report(images, cfg.iou_threshold),
        by_lux: None,
    }
}

/// Evaluates a dataset. Images are reduced in name order, so the result does
/// not depend on the order they were supplied in.
pub fn evaluate(images: &[EvalImage], cfg: &EvalConfig, by_lux: bool) -> EvalReport {
    let mut sorted: Vec<&EvalImage> = images.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut report = report_for(&sorted, cfg);
    if by_lux {
        let groups = bucket_by_lux(sorted.iter().copied(), |img| img.lux);
        let rows = LuxBucket::ALL
            .iter()
            .map(|&bucket| LuxRow {
                bucket,
                report: report_for(groups.buckets.get(&bucket).map_or(&[][..], Vec::as_slice), cfg),
            })
            .collect();
        let unbucketed = (!groups.unbucketed.is_empty()).then(|| Box::new(report_for(&groups.unbucketed, cfg)));
        report.by_lux = Some(LuxReport { rows, unbucketed });
    }
    report
}

fn pct(v: f64, defined: bool) -> String {
    if defined {
        format!("{:.2}", v * 100.0)
    } else {
        "n/a".to_string()
    }
}

/// Human-readable, column-aligned rendering of a report.
pub fn render_table(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "images        {}", report.images);
    let _ = writeln!(out, "ground truth  {}", report.ground_truth);
    let _ = writeln!(out, "detections    {}", report.detections);
    let _ = writeln!(out, "IOU threshold {}", report.iou_threshold);
    let _ = writeln!(out, "MAP (%)       {}", pct(report.map, true));
    let _ = writeln!(out, "meanIOU (%)   {}", pct(report.mean_iou, true));
    let _ = writeln!(out, "precision (%) {}", pct(report.precision, report.precision_defined));
    let _ = writeln!(out, "recall (%)    {}", pct(report.recall, report.recall_defined));
    let _ = writeln!(out, "TP/FP/FN      {}/{}/{}", report.tp, report.fp, report.fn_);
    if let Some(m) = &report.mask {
        let _ = writeln!(out, "mask accuracy (%)  {}", pct(m.accuracy, m.accuracy_defined));
        let _ = writeln!(out, "mask precision (%) {}", pct(m.precision, m.precision_defined));
        let _ = writeln!(out, "mask recall (%)    {}", pct(m.recall, m.recall_defined));
    }
    if let Some(lux) = &report.by_lux {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>6} {:>8} {:>8} {:>9} {:>8} {:>9} {:>10}",
            "illumination", "images", "faces", "MAP", "meanIOU", "precision", "recall", "mask acc", "mask prec"
        );
        let rows = lux
            .rows
            .iter()
            .map(|r| (r.bucket.label(), &r.report))
            .chain(lux.unbucketed.iter().map(|r| ("unbucketed", r.as_ref())));
        for (label, r) in rows {
            let (macc, mprec) = r.mask.as_ref().map_or(("-".to_string(), "-".to_string()), |m| {
                (
                    pct(m.accuracy, m.accuracy_defined),
                    pct(m.precision, m.precision_defined),
                )
            });
            let _ = writeln!(
                out,
                "{:<12} {:>6} {:>6} {:>8} {:>8} {:>9} {:>8} {:>9} {:>10}",
                label,
                r.images,
                r.ground_truth,
                pct(r.map, r.ground_truth > 0),
                pct(r.mean_iou, r.tp > 0),
                pct(r.precision, r.precision_defined),
                pct(r.recall, r.recall_defined),
                macc,
                mprec
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x0: f64, y0: f64, x1: f64, y1: f64) -> BoundingBox {
        BoundingBox::new(x0, y0, x1, y1).unwrap()
    }

    #[test]
    fn precision_recall_examples() {
        let pr = precision_recall(10, 0, 0);
        assert_eq!((pr.precision, pr.recall), (1.0, 1.0));
        let pr = precision_recall(0, 5, 5);
        assert_eq!((pr.precision, pr.recall), (0.0, 0.0));
        let pr = precision_recall(3, 1, 2);
        assert_eq!((pr.precision, pr.recall), (0.75, 0.6));
        let pr = precision_recall(0, 0, 0);
        assert_eq!((pr.precision, pr.recall), (0.0, 0.0));
        assert!(!pr.precision_defined && !pr.recall_defined);
    }

    fn image(name: &str, lux: Option<f64>, gt_mask: bool, predicted_mask: bool) -> EvalImage {
        let gt = b(10.0, 10.0, 40.0, 50.0);
        EvalImage {
            name: name.into(),
            lux,
            ground_truth: vec![(gt, gt_mask)],
            detections: vec![Detection::new(0, gt, 0.9).unwrap()],
            screened: vec![PersonScreeningResult {
                frame_id: 0,
                bbox: gt,
                max_temp: 36.5,
                fever: false,
                mask: predicted_mask,
                mask_score: Some(0.0),
            }],
        }
    }

    #[test]
    fn perfect_dataset() {
        let images = vec![
            image("a", Some(10.0), true, true),
            image("b", Some(200.0), false, false),
        ];
        let r = evaluate(&images, &EvalConfig::default(), true);
        assert_eq!(r.map, 1.0);
        assert_eq!(r.mean_iou, 1.0);
        assert_eq!((r.tp, r.fp, r.fn_), (2, 0, 0));
        let m = r.mask.as_ref().unwrap();
        assert_eq!((m.tp, m.tn, m.accuracy), (1, 1, 1.0));
        let lux = r.by_lux.as_ref().unwrap();
        assert_eq!(lux.rows.len(), 4);
        assert_eq!(lux.rows[0].report.images, 1);
        assert_eq!(lux.rows[1].report.images, 0);
        assert_eq!(lux.rows[3].report.images, 1);
        assert!(lux.unbucketed.is_none());
        let table = render_table(&r);
        assert!(table.contains("0-25 lux") && table.contains(">150 lux"));
    }

    #[test]
    fn mask_errors_counted() {
        let images = vec![image("a", None, true, false), image("b", None, false, true)];
        let r = evaluate(&images, &EvalConfig::default(), true);
        let m = r.mask.unwrap();
        assert_eq!((m.fn_, m.fp, m.accuracy), (1, 1, 0.0));
        assert_eq!(r.by_lux.unwrap().unbucketed.unwrap().images, 2);
    }

    #[test]
    fn report_is_order_independent() {
        let a = image("a", Some(10.0), true, true);
        let mut bimg = image("b", Some(30.0), false, false);
        bimg.detections[0].confidence = 0.9;
        bimg.detections
            .push(Detection::new(0, b(100.0, 100.0, 120.0, 120.0), 0.95).unwrap());
        let r1 = evaluate(&[a.clone(), bimg.clone()], &EvalConfig::default(), true);
        let r2 = evaluate(&[bimg, a], &EvalConfig::default(), true);
        assert_eq!(r1, r2);
    }

    #[test]
    fn report_serializes() {
        let r = evaluate(&[image("a", Some(10.0), true, true)], &EvalConfig::default(), true);
        let json = serde_json::to_string(&r).unwrap();
        let back: EvalReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
