//! Monte-Carlo photon counting with ideal photon-number-resolving detection,
//! and estimation of `g(k)` and `g̃(k)` from the recorded counts.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`). Events are generated in
//! fixed blocks of [`BLOCK_EVENTS`]; block `b` uses the master seed with
//! stream `b`, so the output does not depend on how many threads run. Bootstrap
//! replicate `i` uses stream [`BOOTSTRAP_STREAM_BASE`]` + i`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{scaled_factorial_moment, PhotonStatistics};

pub const BLOCK_EVENTS: usize = 1 << 16;
pub const BOOTSTRAP_STREAM_BASE: u64 = 1 << 48;
pub const DEFAULT_RESAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub counts: Vec<u32>,
    pub seed: u64,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub k: usize,
    pub g_hat: f64,
    pub p0_hat: f64,
    pub g_tilde_postselect: f64,
    pub g_tilde_corrected: f64,
    pub n_events: usize,
    pub n_retained: usize,
    /// Bootstrap standard error of `g_hat`.
    pub stderr_g: f64,
    /// Bootstrap standard error of `g_tilde_postselect`.
    pub stderr_g_tilde: f64,
    /// No retained event had `n >= k`, so both `g` estimates are zero.
    pub kth_moment_vanished: bool,
}

fn block_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n_events` i.i.d. photon numbers by inverse-CDF lookup.
pub fn sample(s: &PhotonStatistics, n_events: usize, seed: u64) -> SampleBatch {
    let mut cdf: Vec<f64> = s
        .probs()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    // u < 1 always lands inside the table
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }
    let counts: Vec<u32> = (0..n_events.div_ceil(BLOCK_EVENTS))
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = BLOCK_EVENTS.min(n_events - b * BLOCK_EVENTS);
            let cdf = &cdf;
            (0..len).map(move |_| {
                let u: f64 = rng.random();
                cdf.partition_point(|&c| c <= u) as u32
            })
        })
        .collect();
    SampleBatch {
        counts,
        seed,
        source: format!(
            "photon statistics nmax={} mean={:.16e}",
            s.nmax(),
            s.mean_photon_number()
        ),
    }
}

/// Counts of each photon number.
#[derive(Debug, Clone, PartialEq)]
struct Histogram {
    bins: Vec<u64>,
}

impl Histogram {
    fn of(counts: &[u32]) -> Self {
        let len = counts.iter().max().map_or(1, |&m| m as usize + 1);
        let mut bins = vec![0u64; len];
        for &c in counts {
            bins[c as usize] += 1;
        }
        Self { bins }
    }

    fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    fn without_vacuum(&self) -> Self {
        let mut bins = self.bins.clone();
        bins[0] = 0;
        Self { bins }
    }

    /// Empirical `g(k)`; `Ok(None)` when no event reaches `n >= k`.
    fn g_k(&self, k: usize) -> Result<Option<f64>> {
        let total = self.total() as f64;
        if total == 0.0 {
            return Err(Error::ZeroMeanSample);
        }
        let weights = || {
            self.bins
                .iter()
                .enumerate()
                .map(|(n, &c)| (n, c as f64 / total))
        };
        let mean: f64 = weights().map(|(n, w)| n as f64 * w).sum();
        if mean <= 0.0 {
            return Err(Error::ZeroMeanSample);
        }
        if self.bins.len() <= k || self.bins[k..].iter().all(|&c| c == 0) {
            return Ok(None);
        }
        Ok(Some(scaled_factorial_moment(weights(), k, mean)))
    }

    /// Multinomial resample of the same total, via sequential binomials.
    fn resample<R: Rng>(&self, rng: &mut R) -> Self {
        let mut left = self.total();
        let mut mass_left = left as f64;
        let bins = self
            .bins
            .iter()
            .map(|&c| {
                if left == 0 || c == 0 {
                    return 0;
                }
                let p = (c as f64 / mass_left).min(1.0);
                mass_left -= c as f64;
                let x = if p >= 1.0 {
                    left
                } else {
                    Binomial::new(left, p).expect("p in [0, 1)").sample(rng)
                };
                left -= x;
                x
            })
            .collect();
        Self { bins }
    }
}

fn check_order(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::DomainError(format!("order k must be >= 2, got {k}")));
    }
    Ok(())
}

/// Empirical `g(k)`: mean of `n(n-1)...(n-k+1)` over the mean of `n` to the
/// `k`-th power. Returns 0 (with a warning) if no event has `n >= k`.
pub fn estimate_g_k(batch: &SampleBatch, k: usize) -> Result<f64> {
    check_order(k)?;
    let g = Histogram::of(&batch.counts).g_k(k)?;
    Ok(g.unwrap_or_else(|| {
        log::warn!("no event with n >= {k}; k-th factorial moment is zero");
        0.0
    }))
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Post-selected estimate of `g̃(k)` next to the `p0`-corrected full-batch
/// estimate, with [`DEFAULT_RESAMPLES`] bootstrap replicates.
pub fn estimate_g_tilde_postselect(batch: &SampleBatch, k: usize) -> Result<EstimateReport> {
    estimate_with_resamples(batch, k, DEFAULT_RESAMPLES)
}

pub fn estimate_with_resamples(
    batch: &SampleBatch,
    k: usize,
    resamples: usize,
) -> Result<EstimateReport> {
    check_order(k)?;
    let hist = Histogram::of(&batch.counts);
    let n_events = batch.counts.len();
    let n_retained = n_events - hist.bins[0] as usize;
    if n_events == 0 || n_retained == 0 {
        return Err(Error::AllVacuumEvents);
    }

    let g_full = hist.g_k(k)?;
    let g_post = hist.without_vacuum().g_k(k)?;
    let vanished = g_post.is_none();
    if vanished {
        log::warn!("no event with n >= {k}; k-th factorial moment is zero");
    }
    let g_hat = g_full.unwrap_or(0.0);
    let g_tilde_postselect = g_post.unwrap_or(0.0);
    let kept = n_retained as f64 / n_events as f64;

    let replicates: Vec<(f64, f64)> = (0..resamples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = block_rng(batch.seed, BOOTSTRAP_STREAM_BASE + i as u64);
            let h = hist.resample(&mut rng);
            let g = h.g_k(k).ok()?.unwrap_or(0.0);
            let gt = h.without_vacuum().g_k(k).ok()?.unwrap_or(0.0);
            Some((g, gt))
        })
        .collect();
    let (gs, gts): (Vec<f64>, Vec<f64>) = replicates.into_iter().unzip();

    Ok(EstimateReport {
        k,
        g_hat,
        p0_hat: 1.0 - kept,
        g_tilde_postselect,
        g_tilde_corrected: kept.powi(k as i32 - 1) * g_hat,
        n_events,
        n_retained,
        stderr_g: std_dev(&gs),
        stderr_g_tilde: std_dev(&gts),
        kth_moment_vanished: vanished,
    })
}

impl SampleBatch {
    /// One count per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.counts.len() * 2);
        for c in &self.counts {
            let _ = writeln!(out, "{c}");
        }
        out
    }

    pub fn from_text(text: &str, seed: u64, source: &str) -> Result<Self> {
        let counts = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim().parse::<u32>().map_err(|_| Error::Parse {
                    source_name: source.to_string(),
                    row: i + 1,
                    message: format!("`{}` is not a photon count", l.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            counts,
            seed,
            source: source.to_string(),
        })
    }

    /// Drops zero-photon events.
    pub fn post_selected(&self) -> Self {
        Self {
            counts: self.counts.iter().copied().filter(|&c| c > 0).collect(),
            seed: self.seed,
            source: format!("{} | n >= 1", self.source),
        }
    }

    pub fn mean(&self) -> f64 {
        if self.counts.is_empty() {
            return 0.0;
        }
        self.counts.iter().map(|&c| c as f64).sum::<f64>() / self.counts.len() as f64
    }
}
