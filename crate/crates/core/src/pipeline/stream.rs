use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use crossbeam_channel::{bounded, unbounded};

use super::events::{ErrorEvent, ScreeningEvent, StreamEvent, StreamSummary};
use super::PipelineConfig;
use crate::data::{load_thermal_frame, LoadOptions};
use crate::detect::FaceDetector;
use crate::radiometric::{normalize_frame, ThermalFrame};
use crate::screen::{screen_frame, MaskSource};
use crate::Result;

/// One unit of work for the stream.
#[derive(Debug, Clone)]
pub enum FrameInput {
    /// A frame already in memory.
    Frame(ThermalFrame),
    /// A frame to be loaded by a worker; metadata is attached after loading.
    File {
        path: PathBuf,
        frame_id: u64,
        timestamp: u64,
        lux: Option<f64>,
    },
}

impl FrameInput {
    fn frame_id(&self) -> u64 {
        match self {
            FrameInput::Frame(f) => f.frame_id(),
            FrameInput::File { frame_id, .. } => *frame_id,
        }
    }
}

/// Everything a worker needs besides the frame itself.
pub struct StreamContext<'a> {
    pub config: &'a PipelineConfig,
    pub detector: &'a dyn FaceDetector,
    pub masks: &'a MaskSource,
}

enum Job {
    Process(FrameInput),
    Reject { frame_id: u64, message: String },
}

fn process(input: FrameInput, ctx: &StreamContext<'_>, load: &LoadOptions) -> Result<ScreeningEvent> {
    let (frame, source) = match input {
        FrameInput::Frame(f) => (f, None),
        FrameInput::File {
            path,
            frame_id,
            timestamp,
            lux,
        } => {
            let frame = load_thermal_frame(&path, load)?
                .with_frame_id(frame_id)
                .with_timestamp(timestamp)
                .with_lux(lux);
            (frame, Some(path))
        }
    };
    let normalized = normalize_frame(&frame, &ctx.config.normalization)?;
    let detections = ctx.detector.detect(&frame, &normalized, source.as_deref())?;
    let persons = screen_frame(&frame, &detections, &ctx.config.screening, ctx.masks)?;
    Ok(ScreeningEvent::new(frame.frame_id(), frame.timestamp(), persons))
}

fn run_job(sequence: u64, job: Job, ctx: &StreamContext<'_>) -> StreamEvent {
    match job {
        Job::Reject { frame_id, message } => StreamEvent::Error(ErrorEvent {
            sequence,
            frame_id: Some(frame_id),
            message,
            processing_latency_ms: None,
        }),
        Job::Process(input) => {
            let frame_id = input.frame_id();
            match process(input, ctx, &ctx.config.load) {
                Ok(event) => StreamEvent::Screening(event),
                Err(e) => StreamEvent::Error(ErrorEvent {
                    sequence,
                    frame_id: Some(frame_id),
                    message: e.to_string(),
                    processing_latency_ms: None,
                }),
            }
        }
    }
}

/// Runs normalize → detect → screen over a frame sequence.
///
/// Frames are processed by a pool of workers and re-ordered before emission,
/// so `sink` sees exactly one event per input frame, in input order. A frame
/// that fails (or arrives with a non-increasing frame id) becomes an error
/// event and the run continues. Latency is measured per frame from the moment
/// it is read off `source` until its event is emitted.
///
/// Returns early only if `sink` fails.
pub fn run_stream<I, S>(source: I, ctx: &StreamContext<'_>, mut sink: S) -> Result<StreamSummary>
where
    I: IntoIterator<Item = FrameInput>,
    I::IntoIter: Send,
    S: FnMut(&StreamEvent) -> Result<()>,
{
    let workers = ctx.config.effective_workers();
    let record_latency = ctx.config.record_latency;
    let started = Instant::now();
    let source = source.into_iter();

    let (job_tx, job_rx) = bounded::<(u64, Job, Instant)>(workers * 4);
    let (done_tx, done_rx) = unbounded::<(u64, StreamEvent, Instant)>();

    let mut summary = StreamSummary {
        frames: 0,
        alerts: 0,
        errors: 0,
        mean_latency_ms: 0.0,
        max_latency_ms: 0.0,
        fps: 0.0,
    };
    let mut latency_sum = 0.0;

    std::thread::scope(|scope| -> Result<()> {
        scope.spawn(move || {
            let mut last_id: Option<u64> = None;
            for (seq, input) in source.enumerate() {
                let ingested = Instant::now();
                let id = input.frame_id();
                let job = match last_id {
                    Some(prev) if id <= prev => Job::Reject {
                        frame_id: id,
                        message: format!("frame {id} arrived after frame {prev}"),
                    },
                    _ => {
                        last_id = Some(id);
                        Job::Process(input)
                    }
                };
                if job_tx.send((seq as u64, job, ingested)).is_err() {
                    break;
                }
            }
        });

        for _ in 0..workers {
            let job_rx = job_rx.clone();
            let done_tx = done_tx.clone();
            scope.spawn(move || {
                for (seq, job, ingested) in job_rx {
                    let event = run_job(seq, job, ctx);
                    if done_tx.send((seq, event, ingested)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(job_rx);
        drop(done_tx);

        let mut pending: BTreeMap<u64, (StreamEvent, Instant)> = BTreeMap::new();
        let mut next = 0u64;
        for (seq, event, ingested) in done_rx {
            pending.insert(seq, (event, ingested));
            while let Some((mut event, ingested)) = pending.remove(&next) {
                let ms = ingested.elapsed().as_secs_f64() * 1e3;
                if record_latency {
                    event.set_latency(ms);
                }
                summary.frames += 1;
                summary.alerts += usize::from(event.is_alert());
                summary.errors += usize::from(matches!(event, StreamEvent::Error(_)));
                latency_sum += ms;
                summary.max_latency_ms = summary.max_latency_ms.max(ms);
                // Dropping the receiver on failure stops the workers.
                sink(&event)?;
                next += 1;
            }
        }
        Ok(())
    })?;

    if summary.frames > 0 {
        summary.mean_latency_ms = latency_sum / summary.frames as f64;
        let elapsed = started.elapsed().as_secs_f64();
        summary.fps = if elapsed > 0.0 {
            summary.frames as f64 / elapsed
        } else {
            f64::INFINITY
        };
    }
    Ok(summary)
}
