#![allow(dead_code)]

use gkbound::PhotonStatistics;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random distribution on `0..=nmax` with some bins knocked out.
pub fn random_distribution<R: Rng>(rng: &mut R, nmax: usize) -> PhotonStatistics {
    let probs: Vec<f64> = (0..=nmax)
        .map(|_| {
            if rng.random_bool(0.25) {
                0.0
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    if probs.iter().all(|&p| p == 0.0) {
        return PhotonStatistics::fock(nmax);
    }
    PhotonStatistics::new(&probs).unwrap()
}

/// Random distribution with weight on both sides of `k`.
pub fn random_split_distribution<R: Rng>(rng: &mut R, k: usize) -> PhotonStatistics {
    loop {
        let nmax = rng.random_range(k..=k + 25);
        let s = random_distribution(rng, nmax);
        let split = s.split_at_k(k).unwrap();
        if split.p > 0.0 && split.q > 0.0 && s.mean_photon_number() > 0.0 {
            return s;
        }
    }
}

/// Root of an increasing-or-decreasing `f` on `[lo, hi]` by plain bisection.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximum of a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Two-point state `w|k-1> + (1-w)|k>` whose `g(k)` equals `target`.
pub fn two_point_with_g(k: usize, target: f64) -> (f64, PhotonStatistics) {
    let w = bisect(0.0, 1.0, |w| {
        gkbound::states::two_point(k, w).unwrap().g_k(k).unwrap() - target
    });
    (w, gkbound::states::two_point(k, w).unwrap())
}
