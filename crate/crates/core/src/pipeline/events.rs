//! Event log records and the run summary.
//!
//! The event log is newline-delimited JSON, one self-contained record per
//! frame, tagged by `kind`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::screen::PersonOutcome;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningEvent {
    pub frame_id: u64,
    /// Capture time, milliseconds since the Unix epoch.
    pub timestamp: u64,
    pub persons: Vec<PersonOutcome>,
    /// Set when any screened person has a fever or no mask.
    pub alert: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub processing_latency_ms: Option<f64>,
}

impl ScreeningEvent {
    pub fn new(frame_id: u64, timestamp: u64, persons: Vec<PersonOutcome>) -> Self {
        let alert = persons
            .iter()
            .filter_map(PersonOutcome::result)
            .any(|p| p.fever || !p.mask);
        Self {
            frame_id,
            timestamp,
            persons,
            alert,
            processing_latency_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEvent {
    /// Position of the frame in the input stream.
    pub sequence: u64,
    pub frame_id: Option<u64>,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub processing_latency_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamEvent {
    Screening(ScreeningEvent),
    Error(ErrorEvent),
}

impl StreamEvent {
    pub fn is_alert(&self) -> bool {
        matches!(self, StreamEvent::Screening(e) if e.alert)
    }

    pub fn frame_id(&self) -> Option<u64> {
        match self {
            StreamEvent::Screening(e) => Some(e.frame_id),
            StreamEvent::Error(e) => e.frame_id,
        }
    }

    pub(crate) fn set_latency(&mut self, ms: f64) {
        match self {
            StreamEvent::Screening(e) => e.processing_latency_ms = Some(ms),
            StreamEvent::Error(e) => e.processing_latency_ms = Some(ms),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("events serialize")
    }

    pub fn from_line(line: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

/// Reads an event log back; blank lines are skipped.
pub fn read_event_log(reader: impl BufRead) -> Result<Vec<StreamEvent>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(StreamEvent::from_line(&line).map_err(|e| Error::parse(i + 1, "event", e.to_string()))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamSummary {
    pub frames: usize,
    pub alerts: usize,
    pub errors: usize,
    pub mean_latency_ms: f64,
    pub max_latency_ms: f64,
    pub fps: f64,
}

impl StreamSummary {
    pub const CSV_HEADER: &'static str = "frames,alerts,mean_latency_ms,max_latency_ms,fps";

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        writeln!(
            out,
            "{},{},{:.3},{:.3},{:.2}",
            self.frames, self.alerts, self.mean_latency_ms, self.max_latency_ms, self.fps
        )?;
        Ok(())
    }
}
