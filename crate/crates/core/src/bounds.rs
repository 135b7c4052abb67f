//! Lower bounds on the sub-`k` projection implied by a measured `g(k)`.
//!
//! Everything here is a function of `k` and the ratio `R = g / g_min(k)`
//! (with `g` replaced by the vacuum-corrected `g̃` where the vacuum fraction is
//! known). The central quantity is `Q_max`, the largest super-`k` weight
//! compatible with `R`: the unique root in `(0, 1]` of
//!
//! ```text
//! h(Q) = k/(k-1) * [ (Q/R)^(1/k) - Q ] + Q - 1
//! ```
//!
//! `h` is strictly concave with `h(0) = -1` and `h(1) >= 0`, so bisection on
//! `(0, 1]` always brackets it. Ratios are handled in log space because
//! `g_min(100) ≈ 1e-42`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::ln_g_min;
use crate::lambert::lambert_w0;

/// Absolute bracket width at which bisection hands over to Newton polishing.
pub const ROOT_TOL: f64 = 1e-12;
/// Iteration cap for the bracketing phase.
pub const MAX_BISECTIONS: usize = 200;
const MAX_POLISH: usize = 30;
/// `ln R` above which `g` is treated as exceeding `g_min`.
const LN_RATIO_SLACK: f64 = 1e-12;
/// `ln R` above which `g` is treated as sitting exactly at `g_min`.
const LN_RATIO_BOUNDARY: f64 = -1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: usize,
    pub g_input: f64,
    pub p0: f64,
    pub g_tilde: f64,
    /// `g̃ / g_min(k)`.
    pub r: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_opt: f64,
    /// Lower bound on `P̃ / Q`; infinite when no super-`k` weight is possible.
    pub ratio_bound: f64,
    pub large_k_p: f64,
}

fn check_order(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::DomainError(format!("order k must be >= 2, got {k}")));
    }
    Ok(())
}

/// `ln(g / g_min(k))`, snapped to exactly 0 within rounding of the boundary.
pub fn ln_ratio(k: usize, g: f64) -> Result<f64> {
    check_order(k)?;
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::OutOfRange {
            what: "g",
            value: g,
            expected: format!("0 < g <= g_min({k})"),
        });
    }
    let ln_r = g.ln() - ln_g_min(k);
    if ln_r > LN_RATIO_SLACK {
        return Err(Error::OutOfRange {
            what: "g",
            value: g,
            expected: format!("0 < g <= g_min({k}) = {:e}", ln_g_min(k).exp()),
        });
    }
    Ok(if ln_r >= LN_RATIO_BOUNDARY { 0.0 } else { ln_r })
}

fn check_ratio(r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0 && r <= 1.0) {
        return Err(Error::OutOfRange {
            what: "R",
            value: r,
            expected: "0 < R <= 1".into(),
        });
    }
    Ok(r.ln())
}

/// `h(Q)` and `h'(Q)` for the bound equality.
fn residual(k: f64, ln_r: f64, q: f64) -> (f64, f64) {
    let root = ((q.ln() - ln_r) / k).exp();
    let h = k / (k - 1.0) * (root - q) + q - 1.0;
    let dh = (root / q - 1.0) / (k - 1.0);
    (h, dh)
}

fn q_max_from_ln_ratio(k: usize, ln_r: f64) -> f64 {
    if ln_r == 0.0 {
        return 1.0;
    }
    let kf = k as f64;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if residual(kf, ln_r, mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton from inside the bracket; concavity makes the iterates monotone
    // once they sit left of the root.
    let mut q = 0.5 * (lo + hi);
    for _ in 0..MAX_POLISH {
        let (h, dh) = residual(kf, ln_r, q);
        if h == 0.0 {
            break;
        }
        if h < 0.0 {
            lo = lo.max(q);
        } else {
            hi = hi.min(q);
        }
        let next = q - h / dh;
        let next = if dh > 0.0 && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - q).abs() <= 2.0 * f64::EPSILON * q;
        q = next;
        if done {
            break;
        }
    }
    q
}

/// `Q_max` for a given ratio `R = g / g_min(k)` in `(0, 1]`.
pub fn q_max_at_ratio(k: usize, r: f64) -> Result<f64> {
    check_order(k)?;
    Ok(q_max_from_ln_ratio(k, check_ratio(r)?))
}

/// Largest super-`k` weight compatible with `g`, for a state assumed to have
/// no vacuum.
pub fn solve_q_max(k: usize, g: f64) -> Result<f64> {
    Ok(q_max_from_ln_ratio(k, ln_ratio(k, g)?))
}

/// Lower bound on the sub-`k` weight `P`, `1 - Q_max`.
pub fn p_min(k: usize, g: f64) -> Result<f64> {
    Ok(1.0 - solve_q_max(k, g)?)
}

pub fn p_min_at_ratio(k: usize, r: f64) -> Result<f64> {
    Ok(1.0 - q_max_at_ratio(k, r)?)
}

/// Vacuum-corrected `g̃ = (1 - p0)^(k-1) g`.
pub fn g_tilde(k: usize, g: f64, p0: f64) -> Result<f64> {
    check_order(k)?;
    if !(0.0..1.0).contains(&p0) {
        return Err(Error::OutOfRange {
            what: "p0",
            value: p0,
            expected: "0 <= p0 < 1".into(),
        });
    }
    Ok((1.0 - p0).powi(k as i32 - 1) * g)
}

/// `Q_max` when the vacuum fraction `p0` is known: `(1 - p0) Q_max(g̃)`.
pub fn q_max_with_vacuum(k: usize, g: f64, p0: f64) -> Result<f64> {
    let gt = g_tilde(k, g, p0)?;
    Ok((1.0 - p0) * solve_q_max(k, gt)?)
}

/// `(g_min / (g̃ Q_max^(k-1)))^(1/k)`, the root term shared by the ratio and
/// optimized bounds.
fn ratio_root(k: usize, ln_r: f64) -> f64 {
    let kf = k as f64;
    let q = q_max_from_ln_ratio(k, ln_r);
    ((-ln_r - (kf - 1.0) * q.ln()) / kf).exp()
}

fn ratio_bound_from_ln_ratio(k: usize, ln_r: f64) -> f64 {
    let kf = k as f64;
    kf / (kf - 1.0) * (ratio_root(k, ln_r) - 1.0)
}

fn p_opt_from_ln_ratio(k: usize, ln_r: f64) -> f64 {
    let x = ratio_root(k, ln_r);
    (x - 1.0) / (x - 1.0 / k as f64)
}

/// Lower bound on `P̃ / Q`, which depends on the state only through `g̃`.
pub fn ratio_bound(k: usize, g_tilde: f64) -> Result<f64> {
    Ok(ratio_bound_from_ln_ratio(k, ln_ratio(k, g_tilde)?))
}

pub fn ratio_bound_at_ratio(k: usize, r: f64) -> Result<f64> {
    check_order(k)?;
    Ok(ratio_bound_from_ln_ratio(k, check_ratio(r)?))
}

/// Lower bound on `P` obtained from the ratio bound `B` as `B / (1 + B)`.
pub fn p_opt(k: usize, g_tilde: f64) -> Result<f64> {
    Ok(p_opt_from_ln_ratio(k, ln_ratio(k, g_tilde)?))
}

pub fn p_opt_at_ratio(k: usize, r: f64) -> Result<f64> {
    check_order(k)?;
    Ok(p_opt_from_ln_ratio(k, check_ratio(r)?))
}

/// Large-`k` limit of `p_min` as a function of `R`: `1 + W0(-R/e)`.
pub fn large_k_p(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange {
            what: "R",
            value: r,
            expected: "0 <= R <= 1".into(),
        });
    }
    let w = lambert_w0(-r / std::f64::consts::E)?;
    Ok((1.0 + w).clamp(0.0, 1.0))
}

/// Large-`k` limit of the ratio bound, `P / (1 - P)` with `P = large_k_p(R)`.
pub fn large_k_ratio(r: f64) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::DomainError(
            "large-k ratio bound diverges at R = 0".into(),
        ));
    }
    let p = large_k_p(r)?;
    Ok(p / (1.0 - p))
}

/// All bounds for a measured `g(k)` and assumed vacuum fraction `p0`.
pub fn bound_report(k: usize, g: f64, p0: f64) -> Result<BoundReport> {
    let gt = g_tilde(k, g, p0)?;
    let ln_r = ln_ratio(k, gt)?;
    let r = ln_r.exp();
    let q_tilde = q_max_from_ln_ratio(k, ln_r);
    Ok(BoundReport {
        k,
        g_input: g,
        p0,
        g_tilde: gt,
        r,
        q_max: (1.0 - p0) * q_tilde,
        p_min: 1.0 - q_tilde,
        p_opt: p_opt_from_ln_ratio(k, ln_r),
        ratio_bound: ratio_bound_from_ln_ratio(k, ln_r),
        large_k_p: large_k_p(r)?,
    })
}

impl BoundReport {
    /// Limiting report for `g = 0`: the state has no weight at `n >= k`.
    pub fn zero_correlation(k: usize, p0: f64) -> Self {
        BoundReport {
            k,
            g_input: 0.0,
            p0,
            g_tilde: 0.0,
            r: 0.0,
            q_max: 0.0,
            p_min: 1.0,
            p_opt: 1.0,
            ratio_bound: f64::INFINITY,
            large_k_p: 1.0,
        }
    }
}
