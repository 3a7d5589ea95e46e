use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{input_error, AugmentArgs, EvaluateArgs, FramesArgs, SynthArgs};
use crate::augment::{augment_image, image_rng, mask_training_crops, AugmentConfig, GammaRange, RgbImage};
use crate::data::{
    find_ground_truth, generate_synthetic_dataset, load_thermal_frame, read_ground_truth, read_manifest,
    save_ground_truth, write_manifest, Dataset, GroundTruthRecord, ManifestEntry, GROUND_TRUTH_FILE, MANIFEST_FILE,
};
use crate::detect::{parse_external_detections, write_detection_line, Detection};
use crate::evaluate::{evaluate as evaluate_images, render_table, split_by_timestamp, EvalConfig, EvalImage};
use crate::pipeline::{
    build_detector, build_mask_source, dataset_inputs, read_event_log, run_stream, FrameInput, PipelineConfig,
    StreamContext, StreamEvent,
};
use crate::radiometric::normalize_frame;
use crate::{Error, Result};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(create(p)?),
        _ => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Prefixes parse errors with the file they came from.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => Error::Dataset(format!("{}: {e}", path.display())),
        other => other,
    })
}

fn save_gray(img: &image::GrayImage, path: &Path) -> Result<()> {
    img.save(path).map_err(|e| Error::Image {
        path: path.into(),
        source: e,
    })
}

fn frame_inputs(input: &Path, frame_id: u64) -> Result<Vec<FrameInput>> {
    if input.is_dir() {
        Ok(dataset_inputs(&Dataset::open(input)?))
    } else {
        Ok(vec![FrameInput::File {
            path: input.to_path_buf(),
            frame_id,
            timestamp: 0,
            lux: None,
        }])
    }
}

pub(super) fn normalize(input: &Path, out: &Path, cfg: &PipelineConfig) -> Result<()> {
    if input.is_dir() {
        let dataset = Dataset::open(input)?;
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        dataset.manifest.par_iter().try_for_each(|entry| -> Result<()> {
            let frame = load_thermal_frame(&dataset.image_path(entry), &cfg.load)?;
            let target = out.join(&entry.image_name).with_extension("png");
            save_gray(&normalize_frame(&frame, &cfg.normalization)?.to_bytes(), &target)
        })?;
        eprintln!("normalized {} frames into {}", dataset.manifest.len(), out.display());
    } else {
        let frame = load_thermal_frame(input, &cfg.load)?;
        save_gray(&normalize_frame(&frame, &cfg.normalization)?.to_bytes(), out)?;
    }
    Ok(())
}

pub(super) fn augment(a: &AugmentArgs) -> Result<()> {
    let cfg = AugmentConfig {
        gray_coefficients: a.coefficients.parse()?,
        gamma_range: GammaRange::new(a.gamma_min, a.gamma_max)?,
        seed: a.seed,
        emit_negatives: a.negatives,
    };
    cfg.validate()?;
    let gt_path = match &a.annotations {
        Some(p) => p.clone(),
        None => find_ground_truth(&a.input)?,
    };
    let records = in_file(&gt_path, read_ground_truth(&gt_path))?;
    let mut by_image: BTreeMap<String, Vec<GroundTruthRecord>> = BTreeMap::new();
    for r in &records {
        by_image.entry(r.image_name.clone()).or_default().push(r.clone());
    }

    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let write_crops = a.crops || a.negatives;
    let crops_dir = a.out.join("crops");
    if write_crops {
        std::fs::create_dir_all(&crops_dir).map_err(|e| Error::io(&crops_dir, e))?;
    }

    let names: Vec<&String> = by_image.keys().collect();
    let per_image: Vec<(f64, Vec<String>)> = names
        .par_iter()
        .enumerate()
        .map(|(i, name)| -> Result<(f64, Vec<String>)> {
            let src = a.input.join(name);
            let rgb = image::open(&src)
                .map_err(|e| Error::Image {
                    path: src.clone(),
                    source: e,
                })?
                .to_rgb8();
            let mut rng = image_rng(cfg.seed, i as u64);
            let (gray, gamma) = augment_image(&RgbImage::from_rgb8(&rgb), &cfg, &mut rng)?;
            save_gray(&gray.to_bytes(), &a.out.join(name))?;

            let mut labels = Vec::new();
            if write_crops {
                let stem = Path::new(name.as_str())
                    .file_stem()
                    .map_or_else(|| name.to_string(), |s| s.to_string_lossy().into_owned());
                let crops = mask_training_crops(&gray, &by_image[name.as_str()], cfg.emit_negatives)?;
                for (k, crop) in crops.iter().enumerate() {
                    let file = format!(
                        "{stem}_{:02}{}.png",
                        k / if cfg.emit_negatives { 2 } else { 1 },
                        if crop.negative { "_neg" } else { "" }
                    );
                    save_gray(&crop.image.to_bytes(), &crops_dir.join(&file))?;
                    labels.push(format!("{file} {}", u8::from(crop.mask)));
                }
            }
            Ok((gamma, labels))
        })
        .collect::<Result<_>>()?;

    save_ground_truth(&records, &a.out.join(GROUND_TRUTH_FILE))?;
    let mut log = create(&a.out.join("gamma.txt"))?;
    for (name, (gamma, _)) in names.iter().zip(&per_image) {
        writeln!(log, "{name} {gamma}")?;
    }
    log.flush()?;
    if write_crops {
        let mut labels = create(&crops_dir.join("labels.txt"))?;
        for line in per_image.iter().flat_map(|(_, l)| l) {
            writeln!(labels, "{line}")?;
        }
        labels.flush()?;
    }
    eprintln!("augmented {} images into {}", names.len(), a.out.display());
    Ok(())
}

pub(super) fn detect(a: &FramesArgs, cfg: &PipelineConfig) -> Result<()> {
    let inputs = frame_inputs(&a.input, a.frame_id)?;
    let detector = build_detector(cfg)?;
    let per_frame: Vec<Vec<Detection>> = inputs
        .into_par_iter()
        .map(|input| -> Result<Vec<Detection>> {
            let FrameInput::File { path, frame_id, .. } = input else {
                unreachable!("CLI inputs are files")
            };
            let frame = load_thermal_frame(&path, &cfg.load)?.with_frame_id(frame_id);
            let normalized = normalize_frame(&frame, &cfg.normalization)?;
            detector
                .detect(&frame, &normalized, Some(&path))
                .map_err(|e| Error::Dataset(format!("{}: {e}", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut out = output(a.out.as_deref())?;
    for det in per_frame.iter().flatten() {
        writeln!(out, "{}", write_detection_line(det))?;
    }
    out.flush()?;
    Ok(())
}

fn write_events(
    inputs: Vec<FrameInput>,
    cfg: &PipelineConfig,
    out: &mut dyn Write,
) -> Result<crate::pipeline::StreamSummary> {
    let detector = build_detector(cfg)?;
    let masks = build_mask_source(cfg)?;
    let ctx = StreamContext {
        config: cfg,
        detector: detector.as_ref(),
        masks: &masks,
    };
    let summary = run_stream(inputs, &ctx, |event: &StreamEvent| {
        if let StreamEvent::Error(e) = event {
            eprintln!(
                "frame {}: {}",
                e.frame_id.map_or("?".into(), |id| id.to_string()),
                e.message
            );
        }
        writeln!(out, "{}", event.to_line())?;
        Ok(())
    })?;
    out.flush()?;
    Ok(summary)
}

pub(super) fn screen(a: &FramesArgs, cfg: &PipelineConfig) -> Result<()> {
    let inputs = frame_inputs(&a.input, a.frame_id)?;
    let mut out = output(a.out.as_deref())?;
    write_events(inputs, cfg, &mut out)?;
    Ok(())
}

pub(super) fn stream(data: &Path, cfg: &PipelineConfig) -> Result<()> {
    let dataset = Dataset::open(data)?;
    let mut out = output(cfg.events_path.as_deref())?;
    let summary = write_events(dataset_inputs(&dataset), cfg, &mut out)?;
    drop(out);
    if let Some(path) = &cfg.summary_path {
        let mut w = create(path)?;
        summary.write_csv(&mut w)?;
        w.flush()?;
    }
    eprintln!(
        "{} frames, {} alerts, {} errors, mean latency {:.3} ms, max latency {:.3} ms, {:.2} fps",
        summary.frames, summary.alerts, summary.errors, summary.mean_latency_ms, summary.max_latency_ms, summary.fps
    );
    if summary.frames > 0 && summary.fps < cfg.target_fps {
        eprintln!(
            "warning: {:.2} fps is below the target of {} fps",
            summary.fps, cfg.target_fps
        );
    }
    Ok(())
}

/// Frame ids index the manifest when there is one, otherwise the sorted
/// distinct image names of the ground truth.
fn frame_table(a: &EvaluateArgs, records: &[GroundTruthRecord]) -> Result<Vec<ManifestEntry>> {
    let manifest = a.manifest.clone().or_else(|| {
        let beside = a.gt.parent().unwrap_or(Path::new(".")).join(MANIFEST_FILE);
        beside.is_file().then_some(beside)
    });
    if let Some(path) = manifest {
        return in_file(&path, read_manifest(&path));
    }
    let mut names: Vec<&str> = records.iter().map(|r| r.image_name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    Ok(names
        .into_iter()
        .map(|n| ManifestEntry {
            image_name: n.to_string(),
            lux: None,
            timestamp: None,
        })
        .collect())
}

pub(super) fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let cfg = EvalConfig {
        iou_threshold: a.iou_threshold,
        ap_method: a.ap_method.parse()?,
        score_threshold: a.score_threshold,
    };
    if !(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0) {
        return Err(input_error(format!(
            "IOU threshold {} outside (0, 1]",
            cfg.iou_threshold
        )));
    }
    let records = in_file(&a.gt, read_ground_truth(&a.gt))?;
    let frames = frame_table(a, &records)?;

    let mut images: Vec<EvalImage> = frames
        .iter()
        .map(|e| EvalImage {
            name: e.image_name.clone(),
            lux: e.lux,
            ..Default::default()
        })
        .collect();
    let index: BTreeMap<&str, usize> = frames
        .iter()
        .enumerate()
        .map(|(i, e)| (e.image_name.as_str(), i))
        .collect();
    for r in &records {
        let &i = index.get(r.image_name.as_str()).ok_or_else(|| {
            input_error(format!(
                "ground truth names {} which is not in the manifest",
                r.image_name
            ))
        })?;
        images[i].ground_truth.push((r.bbox(), r.mask));
    }

    let slot = |frame_id: u64, what: &str| -> Result<usize> {
        usize::try_from(frame_id)
            .ok()
            .filter(|&i| i < images.len())
            .ok_or_else(|| {
                input_error(format!(
                    "{what} refers to frame {frame_id}, but there are {} frames",
                    frames.len()
                ))
            })
    };
    let dets = in_file(&a.dets, parse_external_detections(open(&a.dets)?))?;
    let mut placed = Vec::with_capacity(dets.len());
    for d in dets {
        placed.push((slot(d.frame_id, "a detection")?, d));
    }
    let mut screened = Vec::new();
    if let Some(path) = &a.screening {
        for event in in_file(path, read_event_log(open(path)?))? {
            if let StreamEvent::Screening(e) = event {
                let i = slot(e.frame_id, "a screening event")?;
                screened.extend(e.persons.iter().filter_map(|p| p.result().cloned()).map(|p| (i, p)));
            }
        }
    }
    for (i, d) in placed {
        images[i].detections.push(d);
    }
    for (i, p) in screened {
        images[i].screened.push(p);
    }

    let report = evaluate_images(&images, &cfg, a.by_lux);
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    match a.json.as_deref() {
        Some(p) if p == Path::new("-") => println!("{json}"),
        Some(p) => {
            let mut w = create(p)?;
            writeln!(w, "{json}")?;
            w.flush()?;
            print!("{}", render_table(&report));
        }
        None => print!("{}", render_table(&report)),
    }
    Ok(())
}

pub(super) fn synth(a: &SynthArgs) -> Result<()> {
    let mix = a.scenario.parse()?;
    if !(a.noise.is_finite() && a.noise >= 0.0) {
        return Err(input_error(format!("noise must be non-negative, got {}", a.noise)));
    }
    let summary = generate_synthetic_dataset(a.n, &mix, a.seed, a.noise, &a.out)?;
    println!(
        "{} frames, {} faces written to {}",
        summary.frames,
        summary.faces,
        a.out.display()
    );
    Ok(())
}

pub(super) fn split(manifest: &Path, out: Option<&Path>) -> Result<()> {
    let entries = in_file(manifest, read_manifest(manifest))?;
    let split = split_by_timestamp(entries)?;
    let parts = [("train", &split.train), ("val", &split.val), ("test", &split.test)];
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            for (name, items) in parts {
                let path: PathBuf = dir.join(format!("{name}.txt"));
                let mut w = create(&path)?;
                write_manifest(items, &mut w)?;
            }
            eprintln!(
                "train {}, val {}, test {}",
                split.train.len(),
                split.val.len(),
                split.test.len()
            );
        }
        None => {
            let mut w = output(None)?;
            for (name, items) in parts {
                for e in items {
                    writeln!(w, "{name} {}", e.image_name)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}
