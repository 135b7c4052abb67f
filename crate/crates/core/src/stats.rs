//! Photon-number distributions and the exact quantities derived from them.
//!
//! Only the diagonal of the density matrix in the Fock basis enters any of the
//! correlation functions, so a state is represented by its photon statistics
//! `p_n` alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, normalized photon-number distribution `p_0 ..= p_nmax`.
///
/// Trailing zeros are always trimmed, so `nmax()` is the largest occupied
/// photon number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonStatistics {
    probs: Vec<f64>,
}

/// Decomposition of a state into its sub-`k` (`n < k`) and super-`k`
/// (`n >= k`) parts.
///
/// Quantities that would require dividing by a vanishing `P` or `Q` are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub p_tilde: f64,
    pub n_p: Option<f64>,
    pub n_q: Option<f64>,
    pub g_q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub k: usize,
    pub mean_n: f64,
    pub g: f64,
    pub p0: f64,
    pub g_tilde: f64,
}

/// `sum_n weights[n] * prod_{j<k} (n - j) / scale`, accumulated per term.
///
/// Each term starts from the weight and is multiplied by the (decreasing)
/// ratios, so neither `n!/(n-k)!` nor `scale^k` is ever formed.
pub(crate) fn scaled_factorial_moment<I>(terms: I, k: usize, scale: f64) -> f64
where
    I: IntoIterator<Item = (usize, f64)>,
{
    terms
        .into_iter()
        .filter(|&(n, w)| n >= k && w > 0.0)
        .map(|(n, w)| {
            let nf = n as f64;
            (0..k).fold(w, |t, j| t * ((nf - j as f64) / scale))
        })
        .fold(0.0, |acc, t| acc + t)
}

/// Sum that is `+0.0` when empty (`Iterator::sum` gives `-0.0`).
fn total(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |acc, x| acc + x)
}

impl PhotonStatistics {
    /// Builds a distribution from non-negative weights, normalizing by their sum
    /// and trimming trailing zeros.
    pub fn new(probs: &[f64]) -> Result<Self> {
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteProbability { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if sum <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let normalized: Vec<f64> = if sum == 1.0 {
            probs.to_vec()
        } else {
            probs.iter().map(|p| p / sum).collect()
        };
        Ok(Self::from_trusted(normalized))
    }

    /// The vacuum state `|0>`.
    pub fn vacuum() -> Self {
        Self { probs: vec![1.0] }
    }

    /// The Fock state `|n>`.
    pub fn fock(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Self { probs }
    }

    /// Wraps values that are already non-negative and normalized up to
    /// rounding. Only trims trailing zeros.
    pub(crate) fn from_trusted(mut probs: Vec<f64>) -> Self {
        while probs.len() > 1 && probs.last() == Some(&0.0) {
            probs.pop();
        }
        if probs.is_empty() {
            probs.push(1.0);
        }
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn nmax(&self) -> usize {
        self.probs.len() - 1
    }

    /// `p_n`, zero beyond `nmax`.
    pub fn p(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn p0(&self) -> f64 {
        self.probs[0]
    }

    /// Total weight on `n >= 1`, summed directly rather than as `1 - p0`.
    pub fn nonvacuum_mass(&self) -> f64 {
        total(&self.probs[1..])
    }

    fn indexed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().copied().enumerate()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.indexed().map(|(n, p)| n as f64 * p).sum()
    }

    /// The equal-time correlation function `g(k)(0) = <a†^k a^k> / <a†a>^k`.
    ///
    /// Exactly zero when `nmax < k`.
    pub fn g_k(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::DomainError(
                "correlation order k must be >= 1".into(),
            ));
        }
        let mean = self.mean_photon_number();
        if mean <= 0.0 {
            return Err(Error::VacuumOnlyState);
        }
        Ok(scaled_factorial_moment(self.indexed(), k, mean))
    }

    /// The vacuum-corrected correlation function `(1 - p0)^(k-1) g(k)`.
    pub fn g_tilde_k(&self, k: usize) -> Result<f64> {
        if k < 2 {
            return Err(Error::DomainError(
                "correlation order k must be >= 2".into(),
            ));
        }
        let g = self.g_k(k)?;
        Ok(self.nonvacuum_mass().powi(k as i32 - 1) * g)
    }

    /// Conditions the state on at least one photon: `p_n / (1 - p0)` for `n >= 1`.
    pub fn remove_vacuum(&self) -> Result<Self> {
        let rest = self.nonvacuum_mass();
        if rest <= 0.0 {
            return Err(Error::VacuumOnlyState);
        }
        if self.p0() == 0.0 {
            return Ok(self.clone());
        }
        let mut probs: Vec<f64> = self.probs.iter().map(|p| p / rest).collect();
        probs[0] = 0.0;
        Ok(Self::from_trusted(probs))
    }

    /// Admixes vacuum with weight `p0_add` to a vacuum-free state.
    pub fn mix_vacuum(&self, p0_add: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p0_add) {
            return Err(Error::OutOfRange {
                what: "p0",
                value: p0_add,
                expected: "0 <= p0 < 1".into(),
            });
        }
        if self.p0() != 0.0 {
            return Err(Error::SourceHasVacuum { p0: self.p0() });
        }
        if p0_add == 0.0 {
            return Ok(self.clone());
        }
        let keep = 1.0 - p0_add;
        let mut probs: Vec<f64> = self.probs.iter().map(|p| keep * p).collect();
        probs[0] = p0_add;
        Ok(Self::from_trusted(probs))
    }

    /// The convex combination `s * self + (1 - s) * other`.
    pub fn mix(&self, other: &Self, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange {
                what: "mixing weight",
                value: s,
                expected: "0 <= s <= 1".into(),
            });
        }
        let len = self.probs.len().max(other.probs.len());
        let probs = (0..len)
            .map(|n| s * self.p(n) + (1.0 - s) * other.p(n))
            .collect();
        Ok(Self::from_trusted(probs))
    }

    pub fn split_at_k(&self, k: usize) -> Result<SplitSummary> {
        if k < 2 {
            return Err(Error::DomainError("split order k must be >= 2".into()));
        }
        let cut = k.min(self.probs.len());
        let (sub, sup) = self.probs.split_at(cut);
        let p = total(sub);
        let q = total(sup);
        let p_tilde = total(sub.get(1..).unwrap_or(&[]));

        let n_p = (p > 0.0).then(|| {
            sub.iter()
                .enumerate()
                .map(|(n, w)| n as f64 * w)
                .sum::<f64>()
                / p
        });
        let super_terms = || sup.iter().copied().enumerate().map(|(i, w)| (i + cut, w));
        let n_q = (q > 0.0).then(|| super_terms().map(|(n, w)| n as f64 * w).sum::<f64>() / q);
        let g_q = n_q.map(|nq| scaled_factorial_moment(super_terms(), k, nq) / q);

        Ok(SplitSummary {
            k,
            p,
            q,
            p_tilde,
            n_p,
            n_q,
            g_q,
        })
    }

    pub fn correlation_report(&self, k: usize) -> Result<CorrelationReport> {
        Ok(CorrelationReport {
            k,
            mean_n: self.mean_photon_number(),
            g: self.g_k(k)?,
            p0: self.p0(),
            g_tilde: self.g_tilde_k(k)?,
        })
    }
}
