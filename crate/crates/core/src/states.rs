//! Reference states and the excitation thresholds below which they satisfy the
//! sub-`k` criterion on `g̃(k)`.
//!
//! Note on `k = 2`: the coherent-state threshold is exactly `ln 2 ≈ 0.693`.
//! It is sometimes quoted as `≈ 0.63`, which is a truncation, not the root.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{g_min, ln_g_min};
use crate::stats::PhotonStatistics;

/// Tail mass left out when truncating infinite-support distributions.
pub const TAIL_MASS: f64 = 1e-16;
/// The cut also bounds the tail's share of factorial moments up to this order:
/// `tail * (n / <n>)^order < TAIL_MASS`.
const TAIL_MOMENT_ORDER: f64 = 12.0;

/// Whether a tail of mass `tail` starting at photon number `n` is negligible.
fn tail_negligible(tail: f64, n: usize, mean_n: f64) -> bool {
    let weight = (n as f64 / mean_n).max(1.0).ln() * TAIL_MOMENT_ORDER;
    tail < TAIL_MASS && tail.ln() + weight < TAIL_MASS.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Fock { n: usize },
    Coherent { mean_n: f64 },
    Thermal { lambda: f64 },
    TwoPoint { k: usize, w: f64 },
}

impl StateSpec {
    pub fn build(&self) -> Result<PhotonStatistics> {
        match *self {
            StateSpec::Fock { n } => Ok(PhotonStatistics::fock(n)),
            StateSpec::Coherent { mean_n } => coherent(mean_n),
            StateSpec::Thermal { lambda } => thermal(lambda),
            StateSpec::TwoPoint { k, w } => two_point(k, w),
        }
    }
}

/// Poisson photon statistics with mean `mean_n = |α|²`.
pub fn coherent(mean_n: f64) -> Result<PhotonStatistics> {
    if !(mean_n.is_finite() && mean_n >= 0.0) {
        return Err(Error::OutOfRange {
            what: "mean photon number",
            value: mean_n,
            expected: "finite, >= 0".into(),
        });
    }
    if mean_n == 0.0 {
        return Ok(PhotonStatistics::vacuum());
    }
    let ln_mu = mean_n.ln();
    let mut ln_p = -mean_n;
    let mut probs = Vec::new();
    let mut n = 0usize;
    loop {
        probs.push(ln_p.exp());
        let ln_next = ln_p + ln_mu - ((n + 1) as f64).ln();
        // past the mode the tail is dominated by a geometric series
        let ratio = mean_n / (n + 2) as f64;
        if ratio < 1.0 && tail_negligible(ln_next.exp() / (1.0 - ratio), n + 1, mean_n) {
            break;
        }
        ln_p = ln_next;
        n += 1;
    }
    PhotonStatistics::new(&probs)
}

/// Thermal statistics `(1 - λ) λ^n`.
pub fn thermal(lambda: f64) -> Result<PhotonStatistics> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: lambda,
            expected: "0 <= lambda < 1".into(),
        });
    }
    if lambda == 0.0 {
        return Ok(PhotonStatistics::vacuum());
    }
    let mean_n = lambda / (1.0 - lambda);
    let mut probs = Vec::new();
    let mut p = 1.0 - lambda;
    let mut tail = lambda;
    loop {
        probs.push(p);
        if tail_negligible(tail, probs.len(), mean_n) {
            break;
        }
        p *= lambda;
        tail *= lambda;
    }
    PhotonStatistics::new(&probs)
}

/// Thermal state with the given mean photon number, `λ = n̄ / (1 + n̄)`.
pub fn thermal_from_mean(mean_n: f64) -> Result<PhotonStatistics> {
    if !(mean_n.is_finite() && mean_n >= 0.0) {
        return Err(Error::OutOfRange {
            what: "mean photon number",
            value: mean_n,
            expected: "finite, >= 0".into(),
        });
    }
    thermal(mean_n / (1.0 + mean_n))
}

/// `w |k-1><k-1| + (1 - w) |k><k|`, the state that saturates the bounds.
pub fn two_point(k: usize, w: f64) -> Result<PhotonStatistics> {
    if k < 2 {
        return Err(Error::DomainError(format!("order k must be >= 2, got {k}")));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::OutOfRange {
            what: "w",
            value: w,
            expected: "0 <= w <= 1".into(),
        });
    }
    let mut probs = vec![0.0; k + 1];
    probs[k - 1] = w;
    probs[k] = 1.0 - w;
    Ok(PhotonStatistics::from_trusted(probs))
}

/// Largest `|α|²` for which a coherent state has `g̃(k) <= g_min(k)`, the
/// root of `(1 - e^{-x})^(k-1) = g_min(k)`.
pub fn coherent_threshold(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::DomainError(format!("order k must be >= 2, got {k}")));
    }
    let root = g_min_root(k);
    Ok(-(-root).ln_1p())
}

/// `g_min(k)^(1/(k-1))`, via the log path once `g_min` would underflow.
fn g_min_root(k: usize) -> f64 {
    let gm = g_min(k);
    let e = 1.0 / (k - 1) as f64;
    if gm > 1e-280 {
        gm.powf(e)
    } else {
        (ln_g_min(k) * e).exp()
    }
}

/// `k → ∞` limit of [`coherent_threshold`], `1 - ln(e - 1)`.
pub fn coherent_threshold_limit() -> f64 {
    1.0 - (std::f64::consts::E - 1.0).ln()
}

/// Largest `λ` for which a thermal state has `g̃(k) <= g_min(k)`:
/// `k^{-1} k^{-1/(k-1)}`.
pub fn thermal_threshold(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::DomainError(format!("order k must be >= 2, got {k}")));
    }
    let kf = k as f64;
    Ok(kf.powf(-kf / (kf - 1.0)))
}
