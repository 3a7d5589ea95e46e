//! Acceptance gate: every criterion runs at its stated tolerance and prints
//! one PASS/FAIL line. Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermoscreen::augment::{
    gamma_correct, image_rng, rgb_to_gray, sample_gamma, GammaRange, GrayCoefficients, RgbImage,
};
use thermoscreen::data::{
    generate_synthetic_frame, parse_ground_truth, parse_manifest, plan_synthetic_dataset, write_ground_truth,
    GroundTruthRecord, ScenarioMix,
};
use thermoscreen::detect::{detect_faces_baseline, BaselineDetectorConfig, BoundingBox, Detection};
use thermoscreen::evaluate::{
    average_precision, evaluate, match_detections, split_by_timestamp, EvalConfig, EvalImage, LuxBucket,
};
use thermoscreen::pipeline::{read_event_log, StreamEvent};
use thermoscreen::radiometric::{normalize_frame, NormalizationConfig, ThermalFrame};
use thermoscreen::raster::GrayImage;
use thermoscreen::screen::{classify_fever, classify_mask_heuristic, max_face_temperature, ScreeningConfig};

const BIN: &str = env!("CARGO_BIN_EXE_thermoscreen");

// Frozen thresholds for the screening oracle. The generator keeps face peaks
// at least 0.5 °C from the fever threshold and cools masked rows by 6 °C
// (three times the 2 °C decision margin), so these are exact-by-construction
// targets, not fitted values.
const SCREEN_N: usize = 200;
const SCREEN_SEED: u64 = 42;
const SCREEN_NOISE: f64 = 0.1;
const FEVER_PRECISION_MIN: f64 = 1.0;
const FEVER_RECALL_MIN: f64 = 1.0;
const MASK_ACCURACY_MIN: f64 = 0.95;
const DETECTOR_RECALL_MIN: f64 = 0.90;
const IOU_THRESHOLD: f64 = 0.5;

const THROUGHPUT_FRAMES: usize = 1000;
const TARGET_FPS: f64 = 9.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_bin(args: &[&str]) -> Result<String, String> {
    let out = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`thermoscreen {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

// 1 ------------------------------------------------------------------------

fn normalization_suite() -> Outcome {
    let started = Instant::now();
    let cfg = NormalizationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = 0usize;
    let mut pixels = 0usize;
    for i in 0..1000 {
        let (w, h) = (rng.random_range(1..=64), rng.random_range(1..=48));
        let temps: Vec<f32> = (0..w * h).map(|_| rng.random_range(-10.0f32..=120.0)).collect();
        let frame = ThermalFrame::new(i, w, h, temps).unwrap();
        let img = normalize_frame(&frame, &cfg).unwrap();
        check(img.width() == w && img.height() == h, || {
            format!("frame {i}: dimensions changed")
        })?;
        for &p in img.pixels() {
            check((0.0..=1.0).contains(&p), || {
                format!("frame {i}: pixel {p} outside [0, 1]")
            })?;
        }
        pixels += w * h;
        for _ in 0..10 {
            let a = rng.random_range(0..w * h);
            let b = rng.random_range(0..w * h);
            let (ta, tb) = (frame.temps()[a], frame.temps()[b]);
            let (pa, pb) = (img.pixels()[a], img.pixels()[b]);
            check(ta > tb || pa <= pb, || {
                format!("frame {i}: {ta} <= {tb} but {pa} > {pb}")
            })?;
            pairs += 1;
        }
    }
    for t in [-10.0f32, 20.0, 30.0, 37.0, 45.0, 120.0] {
        let img = normalize_frame(&ThermalFrame::uniform(0, 32, 24, t).unwrap(), &cfg).unwrap();
        check(img.pixels().iter().all(|&p| p == 0.5), || {
            format!("uniform {t} °C frame is not all 0.5")
        })?;
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{pixels} pixels in range, {pairs} monotone pairs, {elapsed:.2?}"
    ))
}

// 2 ------------------------------------------------------------------------

fn augmentation_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100 {
        let (w, h) = (rng.random_range(1..=40), rng.random_range(1..=40));
        let img = GrayImage::new(w, h, (0..w * h).map(|_| rng.random::<f64>()).collect()).unwrap();
        let out = gamma_correct(&img, 1.0).unwrap();
        let identical = img
            .pixels()
            .iter()
            .zip(out.pixels())
            .all(|(a, b)| a.to_bits() == b.to_bits());
        check(identical, || format!("image {i}: gamma 1 is not the identity"))?;
    }
    let red = rgb_to_gray(
        &RgbImage::filled(1, 1, [1.0, 0.0, 0.0]).unwrap(),
        &GrayCoefficients::PUBLISHED,
    );
    check((red.pixels()[0] - 0.229).abs() <= 1e-12, || {
        format!("(1,0,0) -> {}", red.pixels()[0])
    })?;
    let quarter = gamma_correct(&GrayImage::filled(1, 1, 0.25).unwrap(), 0.5).unwrap();
    check((quarter.pixels()[0] - 0.0625).abs() <= 1e-12, || {
        format!("0.25^(1/0.5) -> {}", quarter.pixels()[0])
    })?;

    let range = GammaRange::default();
    check(range.min == 0.3 && range.max == 0.9, || {
        format!("default range {range:?}")
    })?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..10_000u64 {
        let g = sample_gamma(&range, &mut image_rng(7, i));
        check((0.3..=0.9).contains(&g), || format!("draw {i}: γ = {g}"))?;
        lo = lo.min(g);
        hi = hi.max(g);
    }
    Ok(format!(
        "identity exact on 100 images, 10000 γ draws in [{lo:.4}, {hi:.4}]"
    ))
}

// 3 ------------------------------------------------------------------------

type IBox = (i64, i64, i64, i64);

fn area(b: IBox) -> i64 {
    (b.2 - b.0) * (b.3 - b.1)
}

fn inter(a: IBox, b: IBox) -> i64 {
    let w = (a.2.min(b.2) - a.0.max(b.0)).max(0);
    let h = (a.3.min(b.3) - a.1.max(b.1)).max(0);
    w * h
}

/// Point-by-point PR-curve AP in exact integer IOU arithmetic.
fn oracle_ap(dets: &[(IBox, f64)], gts: &[IBox]) -> f64 {
    if gts.is_empty() {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].1.partial_cmp(&dets[a].1).unwrap());
    let mut used = vec![false; gts.len()];
    let mut hits = Vec::new();
    for &d in &order {
        // Best IOU as a fraction (inter, union); IOU >= 1/2 iff 2 inter >= union.
        let mut best: Option<(usize, i64, i64)> = None;
        for (g, &gt) in gts.iter().enumerate() {
            let i = inter(dets[d].0, gt);
            let u = area(dets[d].0) + area(gt) - i;
            if used[g] || i == 0 || 2 * i < u {
                continue;
            }
            if best.is_none_or(|(_, bi, bu)| i * bu > bi * u) {
                best = Some((g, i, u));
            }
        }
        if let Some((g, _, _)) = best {
            used[g] = true;
        }
        hits.push(best.is_some());
    }
    let n = hits.len();
    let mut precision = vec![0.0; n];
    let mut recall = vec![0.0; n];
    let mut tp = 0;
    for k in 0..n {
        tp += usize::from(hits[k]);
        precision[k] = tp as f64 / (k + 1) as f64;
        recall[k] = tp as f64 / gts.len() as f64;
    }
    let mut ap = 0.0;
    let mut prev = 0.0;
    for k in 0..n {
        let best_later = precision[k..].iter().cloned().fold(0.0, f64::max);
        ap += (recall[k] - prev) * best_later;
        prev = recall[k];
    }
    ap
}

fn library_ap(dets: &[(IBox, f64)], gts: &[IBox]) -> f64 {
    let to_box = |b: IBox| BoundingBox::new(b.0 as f64, b.1 as f64, b.2 as f64, b.3 as f64).unwrap();
    let dets: Vec<Detection> = dets
        .iter()
        .map(|&(b, c)| Detection::new(0, to_box(b), c).unwrap())
        .collect();
    let gts: Vec<BoundingBox> = gts.iter().map(|&b| to_box(b)).collect();
    average_precision(&dets, &gts, IOU_THRESHOLD)
}

fn grid_boxes() -> Vec<IBox> {
    let mut out = Vec::new();
    for x0 in 0..4 {
        for x1 in x0 + 1..4 {
            for y0 in 0..4 {
                for y1 in y0 + 1..4 {
                    out.push((x0, y0, x1, y1));
                }
            }
        }
    }
    out
}

fn metric_oracle() -> Outcome {
    let started = Instant::now();
    let boxes = grid_boxes();
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    let mut compare = |dets: &[(IBox, f64)], gts: &[IBox]| -> Result<(), String> {
        let (lib, oracle) = (library_ap(dets, gts), oracle_ap(dets, gts));
        let diff = (lib - oracle).abs();
        worst = worst.max(diff);
        cases += 1;
        check(diff <= 1e-9, || {
            format!("dets {dets:?} gts {gts:?}: library {lib} oracle {oracle}")
        })
    };

    // Exhaustive: up to two items per side, with distinct and tied confidences.
    let mut det_sets: Vec<Vec<(IBox, f64)>> = vec![vec![]];
    for &a in &boxes {
        det_sets.push(vec![(a, 0.7)]);
        for &b in &boxes {
            det_sets.push(vec![(a, 0.9), (b, 0.4)]);
            det_sets.push(vec![(a, 0.5), (b, 0.5)]);
        }
    }
    let mut gt_sets: Vec<Vec<IBox>> = vec![vec![]];
    for &a in &boxes {
        gt_sets.push(vec![a]);
        for &b in &boxes {
            gt_sets.push(vec![a, b]);
        }
    }
    for dets in &det_sets {
        for gts in &gt_sets {
            compare(dets, gts)?;
        }
    }

    // Random: up to five per side, confidences on a coarse scale to force ties.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let nd = rng.random_range(0..=5);
        let ng = rng.random_range(0..=5);
        let dets: Vec<(IBox, f64)> = (0..nd)
            .map(|_| {
                (
                    boxes[rng.random_range(0..boxes.len())],
                    f64::from(rng.random_range(1..=4u8)) / 4.0,
                )
            })
            .collect();
        let gts: Vec<IBox> = (0..ng).map(|_| boxes[rng.random_range(0..boxes.len())]).collect();
        compare(&dets, &gts)?;
    }

    // Worked example: two objects, ranked TP, FP, TP.
    let gts = [(0, 0, 2, 2), (2, 2, 4, 4)];
    let dets = [((0, 0, 2, 2), 0.9), ((0, 2, 1, 3), 0.8), ((2, 2, 4, 4), 0.7)];
    let ap = library_ap(&dets, &gts);
    check(ap == 0.5 + 0.5 * (2.0 / 3.0), || format!("worked example gives {ap}"))?;
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{cases} configurations, max |Δ| = {worst:e}, worked example {ap:.6}, {elapsed:.2?}"
    ))
}

// 4 ------------------------------------------------------------------------

fn screening_oracle() -> Outcome {
    let screening = ScreeningConfig::default();
    let detector = BaselineDetectorConfig::default();
    let plan = plan_synthetic_dataset(SCREEN_N, &ScenarioMix::MIXED, SCREEN_SEED, SCREEN_NOISE);
    let (mut f_tp, mut f_fp, mut f_fn, mut f_tn) = (0usize, 0usize, 0usize, 0usize);
    let (mut mask_right, mut masked, mut faces, mut found) = (0usize, 0usize, 0usize, 0usize);
    for p in &plan {
        let (frame, annotations) = generate_synthetic_frame(&p.scene).unwrap();
        for (face, ann) in p.scene.faces.iter().zip(&annotations) {
            let fever = classify_fever(max_face_temperature(&frame, &ann.bbox).unwrap(), &screening);
            match (fever, face.peak_temp > screening.fever_threshold) {
                (true, true) => f_tp += 1,
                (true, false) => f_fp += 1,
                (false, true) => f_fn += 1,
                (false, false) => f_tn += 1,
            }
            let (mask, _) = classify_mask_heuristic(&frame, &ann.bbox, &screening).unwrap();
            mask_right += usize::from(mask == ann.mask);
            masked += usize::from(ann.mask);
        }
        let dets = detect_faces_baseline(&frame, &detector).unwrap();
        let gts: Vec<BoundingBox> = annotations.iter().map(|a| a.bbox).collect();
        found += match_detections(&dets, &gts, IOU_THRESHOLD).true_positives();
        faces += gts.len();
    }
    check(f_tp > 0 && f_tn > 0 && masked > 0 && masked < faces, || {
        "scenario lacks positive or negative cases".to_string()
    })?;
    let precision = f_tp as f64 / (f_tp + f_fp) as f64;
    let recall = f_tp as f64 / (f_tp + f_fn) as f64;
    let mask_acc = mask_right as f64 / faces as f64;
    let det_recall = found as f64 / faces as f64;
    let summary = format!(
        "{faces} faces: fever P {:.1}% R {:.1}%, mask accuracy {:.2}% (GT boxes), detector recall {:.2}% @ IOU {IOU_THRESHOLD}",
        precision * 100.0,
        recall * 100.0,
        mask_acc * 100.0,
        det_recall * 100.0
    );
    check(
        precision >= FEVER_PRECISION_MIN
            && recall >= FEVER_RECALL_MIN
            && mask_acc >= MASK_ACCURACY_MIN
            && det_recall >= DETECTOR_RECALL_MIN,
        || summary.clone(),
    )?;
    Ok(summary)
}

// 5 ------------------------------------------------------------------------

fn fever_threshold() -> Outcome {
    let cfg = ScreeningConfig::default();
    check(cfg.fever_threshold == 37.5, || {
        format!("default threshold {}", cfg.fever_threshold)
    })?;
    check(!classify_fever(37.5, &cfg), || "37.5 classified febrile".into())?;
    check(classify_fever(37.5 + 1e-6, &cfg), || {
        "37.5 + 1e-6 classified afebrile".into()
    })?;
    Ok("37.5 -> false, 37.5 + 1e-6 -> true".into())
}

// 6 ------------------------------------------------------------------------

fn lux_buckets() -> Outcome {
    let text = "a.png 10 1\nb.png 25 2\nc.png 74 3\nd.png 75 4\ne.png 150 5\nf.png 151 6\n";
    let entries = parse_manifest(text.as_bytes()).unwrap();
    let got: Vec<Option<LuxBucket>> = entries.iter().map(|e| LuxBucket::of(e.lux.unwrap())).collect();
    let want = [
        LuxBucket::B0_25,
        LuxBucket::B25_75,
        LuxBucket::B25_75,
        LuxBucket::B75_150,
        LuxBucket::B150Plus,
        LuxBucket::B150Plus,
    ];
    check(got == want.map(Some), || format!("buckets {got:?}"))?;

    let images: Vec<EvalImage> = entries
        .iter()
        .map(|e| EvalImage {
            name: e.image_name.clone(),
            lux: e.lux,
            ground_truth: vec![(BoundingBox::new(0.0, 0.0, 10.0, 10.0).unwrap(), false)],
            ..Default::default()
        })
        .collect();
    let report = evaluate(&images, &EvalConfig::default(), true);
    let lux = report.by_lux.ok_or("no per-bucket report")?;
    let shape: Vec<(LuxBucket, usize)> = lux.rows.iter().map(|r| (r.bucket, r.report.images)).collect();
    let expected = vec![
        (LuxBucket::B0_25, 1),
        (LuxBucket::B25_75, 2),
        (LuxBucket::B75_150, 1),
        (LuxBucket::B150Plus, 2),
    ];
    check(shape == expected && lux.unbucketed.is_none(), || {
        format!("table shape {shape:?}")
    })?;
    Ok("6 items -> 1/2/1/2 over four rows".into())
}

// 7 ------------------------------------------------------------------------

fn split_fidelity() -> Outcome {
    let text = "i07.png - 7\ni02.png - 2\ni10.png - 10\ni05.png - 5\ni01.png - 1\n\
                i09.png - 9\ni03.png - 3\ni08.png - 8\ni06.png - 6\ni04.png - 4\n";
    let split = split_by_timestamp(parse_manifest(text.as_bytes()).unwrap()).unwrap();
    let ts = |v: &[thermoscreen::data::ManifestEntry]| v.iter().map(|e| e.timestamp.unwrap()).collect::<Vec<_>>();
    let (train, val, test) = (ts(&split.train), ts(&split.val), ts(&split.test));
    check(
        train == (1..=7).collect::<Vec<_>>() && val == [8, 9] && test == [10],
        || format!("train {train:?} val {val:?} test {test:?}"),
    )?;
    Ok("train 1..7, val 8..9, test 10".into())
}

// 8 ------------------------------------------------------------------------

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let n = rng.random_range(0..20);
        let mut records: Vec<GroundTruthRecord> = (0..n)
            .map(|_| {
                let name = format!("img_{:03}.jpg", rng.random_range(0..6));
                let x0 = rng.random_range(0..300u32);
                let y0 = rng.random_range(0..220u32);
                let x1 = x0 + rng.random_range(1..=20u32);
                let y1 = y0 + rng.random_range(1..=20u32);
                GroundTruthRecord::new(name, x0, y0, x1, y1, rng.random()).unwrap()
            })
            .collect();
        let mut text = Vec::new();
        write_ground_truth(&records, &mut text).unwrap();
        let parsed = parse_ground_truth(text.as_slice()).unwrap();
        records.sort_by(|a, b| (&a.image_name, a.y_min, a.x_min).cmp(&(&b.image_name, b.y_min, b.x_min)));
        check(parsed == records, || {
            format!("case {case}: ground truth changed in round trip")
        })?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("data");
    let events = dir.path().join("events.jsonl");
    run_bin(&["synth", "--n", "24", "--seed", "8", "--out", data.to_str().unwrap()])?;
    run_bin(&[
        "stream",
        "--data",
        data.to_str().unwrap(),
        "--events",
        events.to_str().unwrap(),
        "--record-latency",
    ])?;
    let text = std::fs::read_to_string(&events).map_err(|e| e.to_string())?;
    let mut persons = 0;
    for (i, line) in text.lines().enumerate() {
        let event = StreamEvent::from_line(line).map_err(|e| format!("line {}: {e}", i + 1))?;
        check(event.to_line() == line, || {
            format!("line {} does not re-serialize identically", i + 1)
        })?;
        if let StreamEvent::Screening(e) = &event {
            persons += e.persons.len();
        }
    }
    let parsed = read_event_log(text.as_bytes()).map_err(|e| e.to_string())?;
    check(parsed.len() == 24, || format!("{} events for 24 frames", parsed.len()))?;
    Ok(format!(
        "1000 record lists; 24 event lines ({persons} persons) re-parse losslessly"
    ))
}

// 9 ------------------------------------------------------------------------

fn throughput() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("data");
    let events = dir.path().join("events.jsonl");
    let summary = dir.path().join("summary.csv");
    run_bin(&[
        "synth",
        "--n",
        &THROUGHPUT_FRAMES.to_string(),
        "--seed",
        "9",
        "--out",
        data.to_str().unwrap(),
    ])?;
    run_bin(&[
        "stream",
        "--data",
        data.to_str().unwrap(),
        "--events",
        events.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ])?;
    let csv = std::fs::read_to_string(&summary).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    check(
        lines.next() == Some("frames,alerts,mean_latency_ms,max_latency_ms,fps"),
        || format!("header in {csv:?}"),
    )?;
    let row: Vec<&str> = lines.next().ok_or("no summary row")?.split(',').collect();
    let frames: usize = row[0].parse().map_err(|_| "bad frame count")?;
    let fps: f64 = row[4].parse().map_err(|_| "bad fps")?;
    check(frames == THROUGHPUT_FRAMES, || format!("{frames} frames processed"))?;
    check(fps >= TARGET_FPS, || format!("{fps} fps"))?;
    Ok(format!("{frames} frames at {fps:.1} fps (mean latency {} ms)", row[2]))
}

// 10 -----------------------------------------------------------------------

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        run_bin(&["synth", "--n", "200", "--seed", "42", "--out", out.to_str().unwrap()])?;
    }
    let (fa, fb) = (dir_bytes(&a), dir_bytes(&b));
    check(fa == fb, || "synthetic datasets differ".into())?;

    let mut logs = Vec::new();
    for (k, workers) in ["1", "0"].iter().enumerate() {
        let events = dir.path().join(format!("events{k}.jsonl"));
        run_bin(&[
            "stream",
            "--data",
            a.to_str().unwrap(),
            "--events",
            events.to_str().unwrap(),
            "--workers",
            workers,
        ])?;
        logs.push(std::fs::read(&events).map_err(|e| e.to_string())?);
    }
    check(logs[0] == logs[1], || "event logs differ between runs".into())?;
    Ok(format!(
        "{} dataset files identical; event logs identical ({} bytes)",
        fa.len(),
        logs[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("normalization suite", normalization_suite),
        ("grayscale and gamma fidelity", augmentation_fidelity),
        ("AP oracle equivalence", metric_oracle),
        ("screening oracle", screening_oracle),
        ("fever threshold", fever_threshold),
        ("lux buckets", lux_buckets),
        ("chronological split", split_fidelity),
        ("round trips", round_trips),
        ("throughput", throughput),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
