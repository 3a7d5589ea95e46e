//! `manifest.txt`: one image per line, `image_name lux timestamp`, with `-`
//! for an unknown value. Line order defines frame ids (0-based).

use std::io::{BufRead, Write};
use std::path::Path;

use super::ground_truth::check_image_name;
use crate::evaluate::Timestamped;
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub image_name: String,
    pub lux: Option<f64>,
    /// Milliseconds since the Unix epoch.
    pub timestamp: Option<u64>,
}

impl Timestamped for ManifestEntry {
    fn timestamp(&self) -> Option<u64> {
        self.timestamp
    }

    fn name(&self) -> &str {
        &self.image_name
    }
}

pub fn parse_manifest(reader: impl BufRead) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                lineno,
                "record",
                format!("expected 3 fields, found {}", parts.len()),
            ));
        }
        let lux = match parts[1] {
            "-" => None,
            s => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::parse(lineno, "lux", format!("not a number: {s:?}")))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::parse(lineno, "lux", "must be a non-negative number"));
                }
                Some(v)
            }
        };
        let timestamp = match parts[2] {
            "-" => None,
            s => Some(
                s.parse()
                    .map_err(|_| Error::parse(lineno, "timestamp", format!("not an integer: {s:?}")))?,
            ),
        };
        out.push(ManifestEntry {
            image_name: parts[0].to_string(),
            lux,
            timestamp,
        });
    }
    Ok(out)
}

pub fn write_manifest(entries: &[ManifestEntry], mut out: impl Write) -> Result<()> {
    for e in entries {
        check_image_name(&e.image_name).map_err(Error::Dataset)?;
        let lux = e.lux.map_or("-".to_string(), |v| v.to_string());
        let ts = e.timestamp.map_or("-".to_string(), |v| v.to_string());
        writeln!(out, "{} {} {}", e.image_name, lux, ts)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_missing_values() {
        let entries = vec![
            ManifestEntry {
                image_name: "a.png".into(),
                lux: Some(10.0),
                timestamp: Some(5),
            },
            ManifestEntry {
                image_name: "b.png".into(),
                lux: None,
                timestamp: None,
            },
            ManifestEntry {
                image_name: "c.png".into(),
                lux: Some(74.5),
                timestamp: Some(7),
            },
        ];
        let mut buf = Vec::new();
        write_manifest(&entries, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "a.png 10 5\nb.png - -\nc.png 74.5 7\n"
        );
        assert_eq!(parse_manifest(buf.as_slice()).unwrap(), entries);
    }

    #[test]
    fn bad_fields() {
        assert!(parse_manifest("a.png x 5".as_bytes())
            .unwrap_err()
            .to_string()
            .contains("lux"));
        assert!(parse_manifest("a.png -3 5".as_bytes()).is_err());
        assert!(parse_manifest("a.png 3 5.5".as_bytes())
            .unwrap_err()
            .to_string()
            .contains("timestamp"));
        assert!(parse_manifest("a.png 3".as_bytes()).is_err());
    }
}
