//! Reading and writing photon-number distributions.
//!
//! Two input formats are accepted:
//!
//! * CSV with header `n,p`, one row per photon number. Rows may come in any
//!   order; photon numbers that do not appear have probability zero.
//! * A JSON array of probabilities indexed from `n = 0`.
//!
//! Inputs must be normalized to within [`NORMALIZATION_TOL`]; small rounding
//! drift inside that tolerance is renormalized away.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::stats::PhotonStatistics;

pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Upper limit on photon numbers accepted from files.
pub const MAX_PHOTON_NUMBER: usize = 10_000_000;

fn parse_err(source: &str, row: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        row,
        message: message.into(),
    }
}

pub fn read_distribution(path: &Path) -> Result<PhotonStatistics> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_distribution(&text, &path.display().to_string())
}

/// Parses either format, choosing JSON when the text starts with `[`.
pub fn parse_distribution(text: &str, source: &str) -> Result<PhotonStatistics> {
    let probs = if text.trim_start().starts_with('[') {
        parse_json(text, source)?
    } else {
        parse_csv(text, source)?
    };
    validated(probs, source)
}

fn parse_json(text: &str, source: &str) -> Result<Vec<f64>> {
    let values: Vec<serde_json::Value> = serde_json::from_str(text)
        .map_err(|e| parse_err(source, e.line(), format!("invalid JSON array: {e}")))?;
    values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            v.as_f64()
                .ok_or_else(|| parse_err(source, n, format!("entry {n} is not a number: {v}")))
        })
        .collect()
}

fn parse_csv(text: &str, source: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_err(source, 1, e.to_string()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "p" {
        return Err(parse_err(
            source,
            1,
            format!(
                "expected header `n,p`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut probs: Vec<f64> = Vec::new();
    let mut seen: Vec<bool> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            parse_err(source, row, e.to_string())
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let n: usize = record[0].parse().map_err(|_| {
            parse_err(
                source,
                row,
                format!(
                    "photon number `{}` is not a non-negative integer",
                    &record[0]
                ),
            )
        })?;
        if n > MAX_PHOTON_NUMBER {
            return Err(parse_err(
                source,
                row,
                format!("photon number {n} exceeds {MAX_PHOTON_NUMBER}"),
            ));
        }
        let p: f64 = record[1].parse().map_err(|_| {
            parse_err(
                source,
                row,
                format!("probability `{}` is not a number", &record[1]),
            )
        })?;
        if !p.is_finite() || p < 0.0 {
            return Err(parse_err(
                source,
                row,
                format!("invalid probability {p} for n = {n}"),
            ));
        }
        if n >= probs.len() {
            probs.resize(n + 1, 0.0);
            seen.resize(n + 1, false);
        }
        if seen[n] {
            return Err(parse_err(
                source,
                row,
                format!("photon number {n} listed twice"),
            ));
        }
        seen[n] = true;
        probs[n] = p;
    }
    Ok(probs)
}

fn validated(probs: Vec<f64>, source: &str) -> Result<PhotonStatistics> {
    if let Some((n, &p)) = probs
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_finite() || **p < 0.0)
    {
        return Err(parse_err(
            source,
            n,
            format!("invalid probability {p} for n = {n}"),
        ));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    PhotonStatistics::new(&probs)
}

/// Renders the distribution as `n,p` CSV with 17 significant digits.
pub fn to_csv_string(s: &PhotonStatistics) -> String {
    let mut out = String::from("n,p\n");
    for (n, p) in s.probs().iter().enumerate() {
        let _ = writeln!(out, "{n},{p:.16e}");
    }
    out
}

/// Renders the distribution as a JSON array.
pub fn to_json_string(s: &PhotonStatistics) -> String {
    serde_json::to_string(s.probs()).expect("finite probabilities serialize")
}
