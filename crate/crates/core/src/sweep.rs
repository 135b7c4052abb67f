//! Tabulated sweeps for figure data, with a CSV form that reads back exactly.
//!
//! Metadata is written as leading `# key=value` lines, followed by a header
//! row and one row per grid point. Values carry 17 significant digits.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds;
use crate::error::{Error, Result};
use crate::fock;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<(String, Vec<f64>)>,
    metadata: Vec<(String, String)>,
}

impl SweepTable {
    /// The first column is the sweep variable and must be strictly increasing;
    /// all columns must have the same length.
    pub fn new(columns: Vec<(String, Vec<f64>)>, metadata: Vec<(String, String)>) -> Result<Self> {
        let Some((name, first)) = columns.first() else {
            return Err(Error::DomainError(
                "sweep table needs at least one column".into(),
            ));
        };
        let len = first.len();
        if let Some((bad, col)) = columns.iter().find(|(_, c)| c.len() != len) {
            return Err(Error::DomainError(format!(
                "column `{bad}` has {} rows, expected {len}",
                col.len()
            )));
        }
        if first
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::DomainError(format!(
                "sweep column `{name}` must be strictly increasing"
            )));
        }
        Ok(Self { columns, metadata })
    }

    pub fn columns(&self) -> &[(String, Vec<f64>)] {
        &self.columns
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn rows(&self) -> usize {
        self.columns[0].1.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.rows() {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|(_, c)| format!("{:.16e}", c[i]))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((_, line)) = lines.peek() {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            if let Some((k, v)) = rest.trim().split_once('=') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            lines.next();
        }
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::DomainError("sweep CSV has no header".into()))?;
        let mut columns: Vec<(String, Vec<f64>)> = header
            .split(',')
            .map(|h| (h.trim().to_string(), Vec::new()))
            .collect();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(Error::Parse {
                    source_name: "sweep".into(),
                    row: idx + 1,
                    message: format!("expected {} fields, found {}", columns.len(), fields.len()),
                });
            }
            for ((_, col), f) in columns.iter_mut().zip(fields) {
                let v: f64 = f.trim().parse().map_err(|_| Error::Parse {
                    source_name: "sweep".into(),
                    row: idx + 1,
                    message: format!("`{f}` is not a number"),
                })?;
                col.push(v);
            }
        }
        Self::new(columns, metadata)
    }
}

/// Uniform grid of `points` values of `R` from `start` to 1 inclusive.
/// `start` defaults to `1/points`, which keeps the ratio bound finite.
pub fn ratio_grid(points: usize, start: Option<f64>) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::DomainError(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let start = start.unwrap_or(1.0 / points as f64);
    if !(start > 0.0 && start < 1.0) {
        return Err(Error::OutOfRange {
            what: "R start",
            value: start,
            expected: "0 < start < 1".into(),
        });
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                1.0
            } else {
                start + (1.0 - start) * i as f64 / last
            }
        })
        .collect())
}

/// `p_min` and the ratio bound against `R` for each order in `ks`, followed by
/// the large-`k` limits.
pub fn bounds_sweep(ks: &[usize], points: usize, start: Option<f64>) -> Result<SweepTable> {
    let grid = ratio_grid(points, start)?;
    let mut columns = vec![("R".to_string(), grid.clone())];
    for &k in ks {
        let (p, b): (Vec<f64>, Vec<f64>) = grid
            .par_iter()
            .map(|&r| {
                Ok((
                    bounds::p_min_at_ratio(k, r)?,
                    bounds::ratio_bound_at_ratio(k, r)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        columns.push((format!("p_min_k{k}"), p));
        columns.push((format!("ratio_bound_k{k}"), b));
    }
    let (lp, lr): (Vec<f64>, Vec<f64>) = grid
        .par_iter()
        .map(|&r| Ok((bounds::large_k_p(r)?, bounds::large_k_ratio(r)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    columns.push(("large_k_p".into(), lp));
    columns.push(("large_k_ratio".into(), lr));

    let ks_str: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
    let metadata = vec![
        ("table".into(), "bounds".into()),
        ("k".into(), ks_str.join(" ")),
        ("points".into(), points.to_string()),
        ("r_start".into(), format!("{:.16e}", grid[0])),
    ];
    SweepTable::new(columns, metadata)
}

/// `g(k)` of two-coherent-state mixtures with mean ratio `r` and `1/r`, for
/// each order in `ks`. Column `g_k{k}_r` uses `r`, `g_k{k}_rinv` uses `1/r`.
pub fn mixture_table(ks: &[usize], r: f64, points: usize) -> Result<SweepTable> {
    if !(r.is_finite() && r > 0.0) || (r - 1.0).abs() < fock::DEGENERATE_RATIO_TOL {
        return Err(Error::DegenerateRatio(r));
    }
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut metadata = vec![
        ("table".to_string(), "mixture".to_string()),
        ("r".to_string(), format!("{r:.16e}")),
        ("points".to_string(), points.to_string()),
    ];
    type Curve = Vec<(f64, f64)>;
    let per_k: Vec<(usize, Curve, Curve)> = ks
        .par_iter()
        .map(|&k| {
            Ok((
                k,
                fock::mixture_sweep(k, r, points)?,
                fock::mixture_sweep(k, 1.0 / r, points)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, (k, fwd, inv)) in per_k.into_iter().enumerate() {
        if i == 0 {
            columns.push(("s".into(), fwd.iter().map(|p| p.0).collect()));
        }
        let ext = fock::mixture_extremum(k, r, 1.0)?;
        metadata.push((format!("s_star_k{k}"), format!("{:.16e}", ext.s_star)));
        metadata.push((format!("g_max_k{k}"), format!("{:.16e}", ext.g_max)));
        columns.push((format!("g_k{k}_r"), fwd.into_iter().map(|p| p.1).collect()));
        columns.push((
            format!("g_k{k}_rinv"),
            inv.into_iter().map(|p| p.1).collect(),
        ));
    }
    SweepTable::new(columns, metadata)
}
