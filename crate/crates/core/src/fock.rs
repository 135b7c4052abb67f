//! Closed-form correlation values of Fock states and of two-state mixtures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states;

/// `|r - 1|` below which the mixture extremum is treated as degenerate.
pub const DEGENERATE_RATIO_TOL: f64 = 1e-6;

/// `g(k)` of the Fock state `|n>`: `n!/((n-k)! n^k)`, zero for `n < k`.
///
/// Evaluated as the product `prod_{j<k} (n - j)/n`.
pub fn g_fock(k: usize, n: usize) -> f64 {
    if n < k {
        return 0.0;
    }
    let nf = n as f64;
    (0..k).fold(1.0, |acc, j| acc * ((nf - j as f64) / nf))
}

/// The detection threshold `g_min(k) = k!/k^k`, i.e. `g(k)` of `|k>`.
///
/// Underflows to zero beyond `k ≈ 750`; use [`ln_g_min`] there.
pub fn g_min(k: usize) -> f64 {
    g_fock(k, k)
}

/// `ln g_min(k)` as a sum of logarithms of the ratio factors `j/k`.
pub fn ln_g_min(k: usize) -> f64 {
    let kf = k as f64;
    (1..=k).map(|j| (j as f64 / kf).ln()).sum()
}

/// `g_fock(k, n) / g_fock(k, n + 1)`, which lies in `(0, 1]`.
pub fn monotonicity_ratio(k: usize, n: usize) -> Result<f64> {
    if k < 2 || n < k {
        return Err(Error::DomainError(format!(
            "monotonicity ratio needs 2 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let nf = n as f64;
    let n1 = nf + 1.0;
    Ok((0..k).fold(1.0, |acc, j| {
        let jf = j as f64;
        acc * ((1.0 - jf / nf) / (1.0 - jf / n1))
    }))
}

/// Whether `g_value` certifies a nonzero projection onto the Fock states
/// below `n` (strictly `g_value < g(k)[|n>]`). With `n = k` this is the
/// sub-`k` criterion `g < g_min(k)`.
pub fn detect_sub_n(g_value: f64, k: usize, n: usize) -> bool {
    g_value < g_fock(k, n)
}

/// Maximum of `g(k)` over mixtures `s ρ1 + (1 - s) ρ2` of two states with equal
/// `g(k) = g1` and mean photon numbers in ratio `r = n2 / n1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureExtremum {
    pub k: usize,
    pub r: f64,
    pub g1: f64,
    pub s_star: f64,
    pub g_max: f64,
}

/// `ln |r^m - 1|` without overflow for large `m ln r`.
fn ln_abs_pow_minus_one(r: f64, m: usize) -> f64 {
    let x = m as f64 * r.ln();
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().abs().ln()
    }
}

pub fn mixture_extremum(k: usize, r: f64, g1: f64) -> Result<MixtureExtremum> {
    if k < 2 {
        return Err(Error::DomainError(format!("order k must be >= 2, got {k}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            expected: "finite r > 0".into(),
        });
    }
    if !(g1.is_finite() && g1 > 0.0) {
        return Err(Error::OutOfRange {
            what: "g1",
            value: g1,
            expected: "finite g1 > 0".into(),
        });
    }
    if (r - 1.0).abs() < DEGENERATE_RATIO_TOL {
        return Err(Error::DegenerateRatio(r));
    }
    let kf = k as f64;
    let ln_r = r.ln();

    // s* = [r(1 - r^k) - k(1 - r) r^k] / [(k-1)(1 - r)(1 - r^k)], rewritten with
    // b = r^k / (r^k - 1) so neither r^k nor r^-k is formed.
    let b = -1.0 / (-kf * ln_r).exp_m1();
    let s_star = (r + kf * (1.0 - r) * b) / ((kf - 1.0) * (1.0 - r));

    let ln_g_max = g1.ln() + kf * ln_abs_pow_minus_one(r, k) + (kf - 1.0) * (kf - 1.0).ln()
        - (kf - 1.0) * ln_r
        - (r - 1.0).abs().ln()
        - kf * kf.ln()
        - (kf - 1.0) * ln_abs_pow_minus_one(r, k - 1);

    Ok(MixtureExtremum {
        k,
        r,
        g1,
        s_star,
        g_max: ln_g_max.exp(),
    })
}

/// `g(k)` along `s ↦ s |α1><α1| + (1 - s) |α2><α2|` for two coherent states
/// with `|α1|² = 1` and `|α2|² = r`, on a uniform grid of `points` values of
/// `s` from 0 to 1.
pub fn mixture_sweep(k: usize, r: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::DomainError(format!(
            "need at least 2 points, got {points}"
        )));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            expected: "finite r > 0".into(),
        });
    }
    let first = states::coherent(1.0)?;
    let second = states::coherent(r)?;
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let s = i as f64 / last;
            let g = first.mix(&second, s)?.g_k(k)?;
            Ok((s, g))
        })
        .collect()
}
