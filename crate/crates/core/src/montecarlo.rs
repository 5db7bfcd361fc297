//! Idealized photon counting: draw photon numbers from a distribution and
//! estimate d(l) from sample factorial moments, with a bootstrap standard
//! error.
//!
//! # Random streams
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. A run with seed `s` draws its photon counts from
//! stream 0 and its bootstrap resamples from stream 1. Independent task `i`
//! under a master seed `s` uses streams `2i + 2` and `2i + 3` of the same
//! key; see [`task_streams`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, CompensatedSum};
use crate::states::Pnd;

pub const DEFAULT_RESAMPLES: u32 = 200;

const SAMPLE_STREAM: u64 = 0;
const BOOTSTRAP_STREAM: u64 = 1;

/// Generator positioned at the start of `stream` for `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(sampling, bootstrap)` streams for task `task` of a parallel run.
pub fn task_streams(task: u64) -> (u64, u64) {
    (2 * task + 2, 2 * task + 3)
}

/// Photon-count histogram over a contiguous range starting at `n_min`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub n_min: u32,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.n_min + i as u32, c))
    }

    fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub l: u32,
    pub d_hat: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub bootstrap_resamples: u32,
    /// All samples fell on a single photon number; `stderr` is then zero.
    pub degenerate: bool,
}

/// Inverse-CDF sampling of `n_samples` photon numbers from stream 0 of `seed`.
pub fn sample_pnd(pnd: &Pnd, n_samples: u64, seed: u64) -> Histogram {
    sample_pnd_with(pnd, n_samples, &mut rng_for(seed, SAMPLE_STREAM))
}

/// Inverse-CDF sampling with a caller-supplied generator.
///
/// Truncated distributions are sampled conditionally on the stored support.
pub fn sample_pnd_with<R: Rng>(pnd: &Pnd, n_samples: u64, rng: &mut R) -> Histogram {
    let total = pnd.total();
    let mut acc = CompensatedSum::new();
    let cdf: Vec<f64> = pnd
        .probs
        .iter()
        .map(|&p| {
            acc.add(p);
            acc.value() / total
        })
        .collect();
    let last = cdf.len() - 1;
    let mut counts = vec![0u64; cdf.len()];
    for _ in 0..n_samples {
        let u: f64 = rng.random();
        let idx = cdf.partition_point(|&c| c <= u).min(last);
        counts[idx] += 1;
    }
    Histogram {
        n_min: pnd.n_min,
        counts,
    }
}

/// Plug-in factorial moments 0..=order from a histogram.
fn sample_moments(hist: &Histogram, order: u32) -> Vec<f64> {
    let n = hist.total() as f64;
    (0..=order)
        .map(|k| {
            compensated_sum(hist.iter().filter(|&(_, c)| c > 0).map(|(x, c)| {
                let w = (0..k).fold(1.0, |w, j| w * (f64::from(x) - f64::from(j)));
                c as f64 * w
            })) / n
        })
        .collect()
}

fn d_from_moments(m: &[f64], l: u32) -> f64 {
    m[l as usize + 1] - m[1].powi(l as i32 + 1)
}

/// Plug-in d(l) from a histogram.
pub fn d_hat(hist: &Histogram, l: u32) -> f64 {
    d_from_moments(&sample_moments(hist, l + 1), l)
}

/// Multinomial resample of a histogram via sequential conditional binomials.
fn resample<R: Rng>(hist: &Histogram, rng: &mut R) -> Histogram {
    let total = hist.total();
    let mut remaining = total;
    let mut mass_left = 1.0f64;
    let mut counts = vec![0u64; hist.counts.len()];
    for (i, &c) in hist.counts.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if c == 0 {
            continue;
        }
        let p = c as f64 / total as f64;
        let cond = (p / mass_left).clamp(0.0, 1.0);
        let draw = if cond >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, cond)
                .expect("valid binomial")
                .sample(rng)
        };
        counts[i] = draw;
        remaining -= draw;
        mass_left -= p;
    }
    Histogram {
        n_min: hist.n_min,
        counts,
    }
}

/// d(l) estimate with a nonparametric bootstrap standard error.
///
/// Bootstrap resamples are drawn from stream 1 of `seed`.
pub fn estimate_d(
    hist: &Histogram,
    l: u32,
    bootstrap_resamples: u32,
    seed: u64,
) -> Result<McEstimate> {
    estimate_d_with(
        hist,
        l,
        bootstrap_resamples,
        seed,
        &mut rng_for(seed, BOOTSTRAP_STREAM),
    )
}

fn estimate_d_with<R: Rng>(
    hist: &Histogram,
    l: u32,
    bootstrap_resamples: u32,
    seed: u64,
    rng: &mut R,
) -> Result<McEstimate> {
    if l == 0 {
        return Err(Error::Constraint("criterion order l must be >= 1".into()));
    }
    if bootstrap_resamples == 0 {
        return Err(Error::Config("bootstrap_resamples must be >= 1".into()));
    }
    let n_samples = hist.total();
    if n_samples == 0 {
        return Err(Error::Config("histogram is empty".into()));
    }
    let d_hat = d_hat(hist, l);
    let degenerate = hist.occupied_bins() <= 1;
    let stderr = if degenerate {
        0.0
    } else {
        let reps: Vec<f64> = (0..bootstrap_resamples)
            .map(|_| self::d_hat(&resample(hist, rng), l))
            .collect();
        let b = reps.len() as f64;
        let mean = compensated_sum(reps.iter().copied()) / b;
        let var = compensated_sum(reps.iter().map(|x| (x - mean).powi(2))) / (b - 1.0).max(1.0);
        var.sqrt()
    };
    Ok(McEstimate {
        l,
        d_hat,
        stderr,
        n_samples,
        seed,
        bootstrap_resamples,
        degenerate,
    })
}

/// Samples `n_samples` photon numbers and estimates d(l), both from `seed`.
pub fn run(
    pnd: &Pnd,
    l: u32,
    n_samples: u64,
    seed: u64,
    bootstrap_resamples: u32,
) -> Result<McEstimate> {
    if n_samples == 0 {
        return Err(Error::Config("n_samples must be >= 1".into()));
    }
    let hist = sample_pnd(pnd, n_samples, seed);
    estimate_d(&hist, l, bootstrap_resamples, seed)
}

/// Task `task` of a parallel run under `master_seed`, using the streams
/// from [`task_streams`]. The returned estimate records the master seed.
pub fn run_task(
    pnd: &Pnd,
    l: u32,
    n_samples: u64,
    master_seed: u64,
    task: u64,
    bootstrap_resamples: u32,
) -> Result<McEstimate> {
    let (s_stream, b_stream) = task_streams(task);
    let hist = sample_pnd_with(pnd, n_samples, &mut rng_for(master_seed, s_stream));
    estimate_d_with(
        &hist,
        l,
        bootstrap_resamples,
        master_seed,
        &mut rng_for(master_seed, b_stream),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::d_criterion;
    use crate::states::{build_binomial, build_geometric};

    #[test]
    fn vacuum_is_all_zero() {
        let vac = build_binomial(0.0, 3).unwrap();
        let h = sample_pnd(&vac, 1000, 17);
        assert_eq!(h.counts[0], 1000);
        assert_eq!(h.total(), 1000);
        let est = estimate_d(&h, 2, 200, 17).unwrap();
        assert_eq!(est.d_hat, 0.0);
        assert_eq!(est.stderr, 0.0);
        assert!(est.degenerate);
    }

    #[test]
    fn frequencies_match_probabilities() {
        let bs = build_binomial(0.5, 2).unwrap();
        let n = 1_000_000u64;
        let h = sample_pnd(&bs, n, 42);
        for (i, &p) in bs.probs.iter().enumerate() {
            let f = h.counts[i] as f64 / n as f64;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((f - p).abs() < 5.0 * sigma, "bin {i}: {f} vs {p}");
        }
    }

    #[test]
    fn same_seed_same_histogram() {
        let bs = build_binomial(0.3, 8).unwrap();
        assert_eq!(sample_pnd(&bs, 5000, 9), sample_pnd(&bs, 5000, 9));
        assert_ne!(sample_pnd(&bs, 5000, 9), sample_pnd(&bs, 5000, 10));
        let a = run(&bs, 2, 5000, 9, 50).unwrap();
        let b = run(&bs, 2, 5000, 9, 50).unwrap();
        assert_eq!(a.d_hat.to_bits(), b.d_hat.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn binomial_estimate_covers_exact_value() {
        let bs = build_binomial(0.5, 10).unwrap();
        let est = run(&bs, 1, 1_000_000, 3, 200).unwrap();
        assert!(est.stderr > 0.0);
        assert!((est.d_hat + 2.5).abs() < 3.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn geometric_estimate_is_positive() {
        let g = build_geometric(0.5, 1e-15).unwrap();
        let exact = d_criterion(&g, 1);
        let est = run(&g, 1, 1_000_000, 5, 200).unwrap();
        assert!(est.d_hat > 0.0);
        assert!(
            (est.d_hat - exact).abs() < 3.0 * est.stderr,
            "{est:?} vs {exact}"
        );
    }

    #[test]
    fn samples_stay_in_support() {
        let g = build_geometric(0.3, 1e-6).unwrap();
        let h = sample_pnd(&g, 100_000, 1);
        assert_eq!(h.counts.len(), g.probs.len());
        assert_eq!(h.n_min, g.n_min);
    }

    #[test]
    fn resample_preserves_total() {
        let h = Histogram {
            n_min: 2,
            counts: vec![5, 0, 7, 1, 0, 3],
        };
        let mut rng = rng_for(0, 1);
        for _ in 0..100 {
            let r = resample(&h, &mut rng);
            assert_eq!(r.total(), h.total());
            assert_eq!(r.counts[1], 0);
            assert_eq!(r.counts[4], 0);
        }
    }

    #[test]
    fn task_streams_are_distinct() {
        let bs = build_binomial(0.5, 10).unwrap();
        let a = run_task(&bs, 1, 10_000, 7, 0, 20).unwrap();
        let b = run_task(&bs, 1, 10_000, 7, 1, 20).unwrap();
        assert_ne!(a.d_hat, b.d_hat);
        assert_eq!(a, run_task(&bs, 1, 10_000, 7, 0, 20).unwrap());
    }
}
