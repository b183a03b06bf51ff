//! Feature statistics, the two pruning tests, add-one smoothing and the two
//! strength metrics.
//!
//! Pruning and the uncertainty coefficient work on raw counts. Likelihoods
//! and the reliability metric use counts smoothed by adding one to every
//! `m_i`, so every posterior `p(w_i|f)` is strictly positive.

use std::fmt;
use std::str::FromStr;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::Error;

/// Per-word counts for one feature: `matched[i]` occurrences of word `i`
/// matched the feature, out of `totals[i]` occurrences of word `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureStats {
    matched: Vec<u64>,
    totals: Vec<u64>,
}

impl FeatureStats {
    pub fn new(matched: Vec<u64>, totals: Vec<u64>) -> Result<Self, String> {
        if matched.len() != totals.len() {
            return Err(format!(
                "{} matched counts for {} words",
                matched.len(),
                totals.len()
            ));
        }
        if let Some(i) = (0..matched.len()).find(|&i| matched[i] > totals[i]) {
            return Err(format!(
                "word {i} matched {} times out of {}",
                matched[i], totals[i]
            ));
        }
        Ok(FeatureStats { matched, totals })
    }

    pub fn matched(&self) -> &[u64] {
        &self.matched
    }

    pub fn totals(&self) -> &[u64] {
        &self.totals
    }

    pub fn n(&self) -> usize {
        self.totals.len()
    }

    pub fn sum_matched(&self) -> u64 {
        self.matched.iter().sum()
    }

    pub fn sum_unmatched(&self) -> u64 {
        self.grand_total() - self.sum_matched()
    }

    pub fn grand_total(&self) -> u64 {
        self.totals.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruneConfig {
    pub t_min: u64,
    pub alpha: f64,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            t_min: 10,
            alpha: 0.05,
        }
    }
}

impl PruneConfig {
    /// `alpha == 1` is accepted as the degenerate level that keeps every
    /// feature with a non-zero statistic.
    pub fn validate(&self) -> Result<(), String> {
        if self.t_min < 1 {
            return Err("t_min must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        Ok(())
    }
}

/// Keep iff the feature is present at least `t_min` times and absent at
/// least `t_min` times over all training occurrences.
pub fn passes_min_occurrences(stats: &FeatureStats, t_min: u64) -> bool {
    stats.sum_matched() >= t_min && stats.sum_unmatched() >= t_min
}

/// Pearson chi-square statistic of the 2×n table (present/absent × word),
/// without continuity correction. Zero when any marginal is zero.
pub fn chi_square_statistic(stats: &FeatureStats) -> f64 {
    let total = stats.grand_total() as f64;
    let present = stats.sum_matched() as f64;
    let absent = stats.sum_unmatched() as f64;
    if present == 0.0 || absent == 0.0 || stats.totals.contains(&0) {
        return 0.0;
    }
    stats
        .matched
        .iter()
        .zip(&stats.totals)
        .map(|(&m, &big_m)| {
            let col = big_m as f64;
            let cell = |observed: f64, row: f64| {
                let expected = row * col / total;
                (observed - expected).powi(2) / expected
            };
            cell(m as f64, present) + cell((big_m - m) as f64, absent)
        })
        .sum()
}

/// Upper `alpha` quantile of the chi-square distribution with `df` degrees
/// of freedom.
pub fn chi_square_critical(alpha: f64, df: usize) -> f64 {
    if alpha >= 1.0 {
        return 0.0;
    }
    ChiSquared::new(df as f64)
        .expect("degrees of freedom are positive")
        .inverse_cdf(1.0 - alpha)
}

/// Keep iff the statistic exceeds the critical value for `n - 1` degrees
/// of freedom.
pub fn chi_square_keep(stats: &FeatureStats, alpha: f64) -> bool {
    chi_square_statistic(stats) > chi_square_critical(alpha, stats.n() - 1)
}

/// Smoothed `p(f|w_i) = (m_i + 1) / (M_i + 2)`.
pub fn smoothed_likelihood(stats: &FeatureStats, i: usize) -> f64 {
    (stats.matched[i] as f64 + 1.0) / (stats.totals[i] as f64 + 2.0)
}

/// Smoothed `p(w_i|f) = (m_i + 1) / Σ_j (m_j + 1)`.
pub fn smoothed_posteriors(stats: &FeatureStats) -> Vec<f64> {
    let counts: Vec<f64> = stats.matched.iter().map(|&m| m as f64 + 1.0).collect();
    let sum: f64 = counts.iter().sum();
    counts.into_iter().map(|c| c / sum).collect()
}

/// `max_i c_i / Σ_j c_j` for arbitrary per-word counts.
pub fn max_share(counts: &[f64]) -> f64 {
    let sum: f64 = counts.iter().sum();
    if sum <= 0.0 {
        return 0.0;
    }
    counts.iter().copied().fold(0.0, f64::max) / sum
}

/// Reliability′ = max_i p(w_i|f) over add-one smoothed counts.
pub fn reliability_strength(stats: &FeatureStats) -> f64 {
    let smoothed: Vec<f64> = stats.matched.iter().map(|&m| m as f64 + 1.0).collect();
    max_share(&smoothed)
}

fn xlnx(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

fn binary_entropy(p: f64) -> f64 {
    -xlnx(p) - xlnx(1.0 - p)
}

/// Uncertainty coefficient U(x|y) of feature presence given the word, over
/// all training occurrences, from raw proportions.
pub fn uncertainty_strength(stats: &FeatureStats) -> f64 {
    let total = stats.grand_total() as f64;
    if total == 0.0 {
        return 0.0;
    }
    let h_x = binary_entropy(stats.sum_matched() as f64 / total);
    if h_x <= 0.0 {
        return 0.0;
    }
    let h_x_given_y: f64 = stats
        .matched
        .iter()
        .zip(&stats.totals)
        .filter(|(_, &big_m)| big_m > 0)
        .map(|(&m, &big_m)| (big_m as f64 / total) * binary_entropy(m as f64 / big_m as f64))
        .sum();
    ((h_x - h_x_given_y) / h_x).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Reliability,
    Uncertainty,
}

impl Metric {
    pub fn strength(self, stats: &FeatureStats) -> f64 {
        match self {
            Metric::Reliability => reliability_strength(stats),
            Metric::Uncertainty => uncertainty_strength(stats),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Reliability => "reliability",
            Metric::Uncertainty => "uxy",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "reliability" => Ok(Metric::Reliability),
            "uxy" => Ok(Metric::Uncertainty),
            other => Err(Error::Usage(format!(
                "unknown metric {other:?} (expected reliability or uxy)"
            ))),
        }
    }
}
