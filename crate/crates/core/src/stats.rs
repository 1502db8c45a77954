//! Exact and sampled averages of the number of Pop passes.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::bound::{best_bound_from_first_pass, lichev_event_from_first_pass, BestBound};
use crate::enumerate::{factorial, par_scan};
use crate::error::{Error, Result};
use crate::permutation::{sort_in_place, t_star, Permutation};
use crate::sampling::sample_permutation;

/// Default largest `n` for exhaustive averages (11! ≈ 4·10^7 traces).
pub const DEFAULT_EXACT_CAP: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Sampled,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Sampled => "sampled",
        }
    }
}

/// How permutations are drawn for a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DnEstimate {
    pub n: usize,
    pub method: Method,
    pub mean_t_star: f64,
    /// Exact mean as a reduced fraction (exact method only).
    pub exact_mean: Option<Ratio<u64>>,
    pub ratio: f64,
    pub samples: Option<u64>,
    pub std_error: Option<f64>,
    pub seed: Option<u64>,
}

/// Counts of `t*` values; `counts[t]` is the number of permutations needing
/// exactly `t` passes, for `t` in `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub n: usize,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of `t * counts[t]`.
    pub fn weighted_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(t, &c)| t as u64 * c)
            .sum()
    }
}

fn check_exact_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::AboveExhaustiveCap { n, cap });
    }
    Ok(())
}

fn exact_histogram(n: usize, cap: usize) -> Result<Histogram> {
    check_exact_cap(n, cap)?;
    struct Acc {
        counts: Vec<u64>,
        scratch: Vec<u32>,
        error: Option<Error>,
    }
    let shards = par_scan(
        n,
        || Acc {
            counts: vec![0; n],
            scratch: Vec::with_capacity(n),
            error: None,
        },
        |acc, values| {
            acc.scratch.clear();
            acc.scratch.extend_from_slice(values);
            match sort_in_place(&mut acc.scratch) {
                Ok(t) if t < n => acc.counts[t] += 1,
                Ok(_) => {
                    acc.error.get_or_insert(Error::IterationCap { n, cap: n });
                }
                Err(e) => {
                    acc.error.get_or_insert(e);
                }
            }
        },
    );
    let mut counts = vec![0; n];
    for shard in shards {
        if let Some(e) = shard.error {
            return Err(e);
        }
        for (total, c) in counts.iter_mut().zip(shard.counts) {
            *total += c;
        }
    }
    Ok(Histogram { n, counts })
}

/// `t*` of samples `0..samples`, in sample order.
fn sampled_t_stars(n: usize, samples: u64, seed: u64) -> Result<Vec<usize>> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidParameter(
            "n and samples must be at least 1".into(),
        ));
    }
    (0..samples)
        .into_par_iter()
        .map(|j| t_star(&sample_permutation(n, seed, j)))
        .collect()
}

pub fn exact_dn(n: usize) -> Result<DnEstimate> {
    exact_dn_with_cap(n, DEFAULT_EXACT_CAP)
}

pub fn exact_dn_with_cap(n: usize, cap: usize) -> Result<DnEstimate> {
    let hist = exact_histogram(n, cap)?;
    let mean = Ratio::new(hist.weighted_sum(), factorial(n));
    let mean_f = *mean.numer() as f64 / *mean.denom() as f64;
    Ok(DnEstimate {
        n,
        method: Method::Exact,
        mean_t_star: mean_f,
        exact_mean: Some(mean),
        ratio: mean_f / n as f64,
        samples: None,
        std_error: None,
        seed: None,
    })
}

/// Monte-Carlo mean of `t*`. The standard error uses the `n - 1` sample
/// standard deviation and is 0 for a single sample.
pub fn sampled_dn(n: usize, samples: u64, seed: u64) -> Result<DnEstimate> {
    let ts = sampled_t_stars(n, samples, seed)?;
    let count = ts.len() as f64;
    let mean = ts.iter().map(|&t| t as f64).sum::<f64>() / count;
    let std_error = if ts.len() > 1 {
        let var = ts.iter().map(|&t| (t as f64 - mean).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    Ok(DnEstimate {
        n,
        method: Method::Sampled,
        mean_t_star: mean,
        exact_mean: None,
        ratio: mean / n as f64,
        samples: Some(samples),
        std_error: Some(std_error),
        seed: Some(seed),
    })
}

pub fn t_star_distribution(n: usize, source: Source) -> Result<Histogram> {
    match source {
        Source::Exact => exact_histogram(n, DEFAULT_EXACT_CAP),
        Source::Sampled { samples, seed } => {
            let mut counts = vec![0; n];
            for t in sampled_t_stars(n, samples, seed)? {
                counts[t] += 1;
            }
            Ok(Histogram { n, counts })
        }
    }
}

/// Fraction of uniform samples of length `n` showing the large-element-far-left
/// event after one pass.
pub fn lichev_fraction(n: usize, samples: u64, seed: u64) -> Result<f64> {
    if n < 2 || samples == 0 {
        return Err(Error::InvalidParameter(
            "need n >= 2 and samples >= 1".into(),
        ));
    }
    let hits: u64 = (0..samples)
        .into_par_iter()
        .map(|j| {
            u64::from(lichev_event_from_first_pass(
                &sample_permutation(n, seed, j).pop(),
            ))
        })
        .sum();
    Ok(hits as f64 / samples as f64)
}

/// Same fraction over an explicit list of permutations.
pub fn lichev_fraction_of(perms: &[Permutation]) -> f64 {
    if perms.is_empty() {
        return 0.0;
    }
    let hits = perms
        .par_iter()
        .filter(|p| lichev_event_from_first_pass(&p.pop()))
        .count();
    hits as f64 / perms.len() as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundGapRecord {
    pub sample_index: u64,
    pub t_star: usize,
    pub best_bound: u64,
    pub witness: Option<(usize, usize)>,
    pub lichev_event: bool,
}

impl BoundGapRecord {
    pub fn gap(&self) -> i64 {
        self.t_star as i64 - self.best_bound as i64
    }
}

/// `t*`, best bound and event flag for one permutation. The identity gets
/// bound 0 with no witness.
pub fn gap_record(sample_index: u64, p: &Permutation) -> Result<BoundGapRecord> {
    let sigma1 = p.pop();
    let t = t_star(p)?;
    let best = if p.is_identity() {
        BestBound {
            bound: 0,
            witness: None,
        }
    } else {
        best_bound_from_first_pass(&sigma1)
    };
    Ok(BoundGapRecord {
        sample_index,
        t_star: t,
        best_bound: best.bound,
        witness: best.witness,
        lichev_event: lichev_event_from_first_pass(&sigma1),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub mean_t_star_ratio: f64,
    pub mean_bound_ratio: f64,
    pub min_gap: i64,
    pub lichev_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub records: Vec<BoundGapRecord>,
    pub summary: GapSummary,
}

pub fn bound_gap_report(n: usize, samples: u64, seed: u64) -> Result<GapReport> {
    if n < 2 || samples == 0 {
        return Err(Error::InvalidParameter(
            "need n >= 2 and samples >= 1".into(),
        ));
    }
    let records = (0..samples)
        .into_par_iter()
        .map(|j| gap_record(j, &sample_permutation(n, seed, j)))
        .collect::<Result<Vec<_>>>()?;
    let count = records.len() as f64;
    let nf = n as f64;
    let summary = GapSummary {
        n,
        samples,
        seed,
        mean_t_star_ratio: records.iter().map(|r| r.t_star as f64 / nf).sum::<f64>() / count,
        mean_bound_ratio: records
            .iter()
            .map(|r| r.best_bound as f64 / nf)
            .sum::<f64>()
            / count,
        min_gap: records.iter().map(BoundGapRecord::gap).min().unwrap_or(0),
        lichev_fraction: records.iter().filter(|r| r.lichev_event).count() as f64 / count,
    };
    Ok(GapReport { records, summary })
}
