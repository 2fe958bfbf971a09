//! Deterministic artifact writing: CSV and JSON with an embedded hash of
//! the resolved configuration, and a dependency-free SVG scatter.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_rational::BigRational;
use num_traits::One;
use sha2::{Digest, Sha256};

use crate::CliResult;

/// Hash of the resolved run configuration: the subcommand descriptor plus
/// the content of every input file. Two runs with the same hash produce
/// byte-identical artifacts.
pub struct ConfigHash(String);

impl ConfigHash {
    pub fn new(descriptor: &str, input_files: &[&Path]) -> CliResult<Self> {
        let mut hasher = Sha256::new();
        hasher.update(descriptor.as_bytes());
        for path in input_files {
            hasher.update(b"\0file\0");
            hasher.update(fs::read(path)?);
        }
        Ok(ConfigHash(hex_digest(hasher)))
    }

    pub fn hex(&self) -> &str {
        &self.0
    }
}

fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes `text` to the file, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(p, text)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// CSV with a `# config <hash>` comment line and a header row.
pub fn csv_document(hash: &ConfigHash, header: &str, rows: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# config {}\n", hash.hex()));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

/// Pretty JSON with the config hash injected as a top-level field.
pub fn json_document(hash: &ConfigHash, value: serde_json::Value) -> String {
    let mut wrapped = serde_json::Map::new();
    wrapped.insert(
        "config".to_string(),
        serde_json::Value::String(hash.hex().to_string()),
    );
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                wrapped.insert(k, v);
            }
        }
        other => {
            wrapped.insert("result".to_string(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(wrapped))
        .expect("JSON serialization cannot fail");
    text.push('\n');
    text
}

/// Exact rationals serialize as decimal strings when integral and as
/// `p/q` strings otherwise, never as floats.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A plain scatter SVG; no external renderer involved.
pub fn svg_scatter(hash: &ConfigHash, points: &[(f64, f64)]) -> String {
    let (width, height, margin) = (800.0, 800.0, 40.0);
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if points.is_empty() {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    let x_span = (x_hi - x_lo).max(1e-9);
    let y_span = (y_hi - y_lo).max(1e-9);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<!-- config {} -->\n",
        hash.hex()
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for &(x, y) in points {
        let px = margin + (x - x_lo) / x_span * (width - 2.0 * margin);
        let py = height - margin - (y - y_lo) / y_span * (height - 2.0 * margin);
        svg.push_str(&format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"1.2\" fill=\"black\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
