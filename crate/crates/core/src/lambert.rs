//! Principal branch `W0` of the Lambert-W function on `[-1/e, 0]`.

use std::f64::consts::E;

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;
const DOMAIN_SLACK: f64 = 1e-15;
const MAX_ITER: usize = 50;

/// Solves `w e^w = x` for `w ∈ [-1, 0]` by Halley iteration.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(BRANCH_POINT - DOMAIN_SLACK..=0.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // distance from the branch point, scaled so that p ≈ w + 1 there
    let q = (E * x + 1.0).max(0.0);
    if q == 0.0 {
        return Ok(-1.0);
    }

    let mut w = if x < -0.25 {
        let p = (2.0 * q).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        x.ln_1p()
    };

    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let w1 = w + 1.0;
        if w1 <= 0.0 {
            break;
        }
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        if denom == 0.0 {
            break;
        }
        let step = f / denom;
        w = (w - step).clamp(-1.0, 0.0);
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}
