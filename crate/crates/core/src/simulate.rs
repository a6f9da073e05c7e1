//! Monte-Carlo and brute-force checks of the closed-form error.
//!
//! Simulation draws Bernoulli trials until the `N`-th success, forms
//! `p̂ = (N - 1) / (n - 1)` and accumulates `|p̂ - p| / p`, `p̂` and `n` with
//! Welford updates. Work is split into shards; shard `k` draws from ChaCha8
//! stream `k` of the configured seed, so shards never share random numbers.
//! Shard results are merged in shard order, which makes the output
//! bit-identical for a fixed `(seed, shards, trials)`. Different shard
//! counts give statistically compatible but not identical results.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distributions::{nbin_pmf, nbin_sf, Probability, SuccessTarget};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::stats::RunningStats;

/// `2^-53`
const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Multiplier on the mean trial count `N / p` before a run is abandoned.
const TRIAL_CAP_FACTOR: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub successes: SuccessTarget,
    pub p: Probability,
    pub trials: u64,
    pub seed: u64,
    pub shards: u32,
}

impl RunConfig {
    pub fn new(
        successes: SuccessTarget,
        p: Probability,
        trials: u64,
        seed: u64,
        shards: u32,
    ) -> Result<Self> {
        let cfg = RunConfig {
            successes,
            p,
            trials,
            seed,
            shards,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if self.shards == 0 {
            return Err(Error::domain("shards must be at least 1"));
        }
        Ok(())
    }

    /// Trials assigned to `shard`; the first `trials % shards` shards take
    /// one extra.
    fn shard_trials(&self, shard: u32) -> u64 {
        let shards = self.shards as u64;
        self.trials / shards + u64::from((shard as u64) < self.trials % shards)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Mean of `|p̂ - p| / p`.
    pub mean_normalized_abs_error: f64,
    pub std_error: f64,
    pub trials: u64,
    /// Mean of `n`; estimates `N / p`.
    pub mean_sample_size: f64,
    pub sample_size_std_error: f64,
    /// Mean of `p̂`; estimates `p`.
    pub mean_estimate: f64,
    pub estimate_std_error: f64,
    pub seed: u64,
    pub shards: u32,
}

/// Uniform on `[0, 1)` with 53 random bits.
#[inline]
fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * UNIT_SCALE
}

/// Draws Bernoulli(`p`) trials until the `N`-th success and returns how many
/// trials that took.
pub fn run_inverse_binomial<R: RngCore + ?Sized>(
    successes: SuccessTarget,
    p: Probability,
    rng: &mut R,
) -> Result<u64> {
    let cap = TRIAL_CAP_FACTOR * successes.as_f64() / p.get();
    let cap = if cap >= u64::MAX as f64 {
        u64::MAX
    } else {
        cap as u64
    };
    run_with_cap(successes, p, rng, cap)
}

fn run_with_cap<R: RngCore + ?Sized>(
    successes: SuccessTarget,
    p: Probability,
    rng: &mut R,
    cap: u64,
) -> Result<u64> {
    let pf = p.get();
    let mut seen = 0;
    let mut n = 0u64;
    while seen < successes.get() {
        if n == cap {
            return Err(Error::TrialCapExceeded { cap });
        }
        n += 1;
        if uniform(rng) < pf {
            seen += 1;
        }
    }
    Ok(n)
}

/// `p̂ = (N - 1) / (n - 1)`.
pub fn estimate_p(successes: SuccessTarget, n: u64) -> Result<f64> {
    if n < successes.get() {
        return Err(Error::domain(format!(
            "trial count {n} is below the number of successes {successes}"
        )));
    }
    Ok((successes.get() - 1) as f64 / (n - 1) as f64)
}

#[derive(Debug, Clone, Copy, Default)]
struct ShardStats {
    abs_error: RunningStats,
    estimate: RunningStats,
    sample_size: RunningStats,
}

impl ShardStats {
    fn merge(&mut self, other: &ShardStats) {
        self.abs_error.merge(&other.abs_error);
        self.estimate.merge(&other.estimate);
        self.sample_size.merge(&other.sample_size);
    }
}

fn shard_rng(seed: u64, shard: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

fn run_shard(cfg: &RunConfig, shard: u32) -> Result<ShardStats> {
    let mut rng = shard_rng(cfg.seed, shard);
    let pf = cfg.p.get();
    let mut stats = ShardStats::default();
    for _ in 0..cfg.shard_trials(shard) {
        let n = run_inverse_binomial(cfg.successes, cfg.p, &mut rng)?;
        let estimate = estimate_p(cfg.successes, n)?;
        stats.abs_error.push((estimate - pf).abs() / pf);
        stats.estimate.push(estimate);
        stats.sample_size.push(n as f64);
    }
    Ok(stats)
}

/// Empirical normalized MAE over `cfg.trials` independent runs.
///
/// Shards execute in parallel.
pub fn mc_normalized_mae(cfg: &RunConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let per_shard: Vec<ShardStats> = (0..cfg.shards)
        .into_par_iter()
        .map(|k| run_shard(cfg, k))
        .collect::<Result<_>>()?;
    let mut total = ShardStats::default();
    for s in &per_shard {
        total.merge(s);
    }
    Ok(McEstimate {
        mean_normalized_abs_error: total.abs_error.mean(),
        std_error: total.abs_error.std_error(),
        trials: total.abs_error.count(),
        mean_sample_size: total.sample_size.mean(),
        sample_size_std_error: total.sample_size.std_error(),
        mean_estimate: total.estimate.mean(),
        estimate_std_error: total.estimate.std_error(),
        seed: cfg.seed,
        shards: cfg.shards,
    })
}

/// `Σ_{n=N}^{n_max} f_N(n) |(N - 1)/(n - 1) - p| / p`, the expectation summed
/// directly over the negative-binomial support.
///
/// Every omitted term has `|p̂ - p| ≤ 1`, so the neglected part is at most
/// `(1 - F_N(n_max)) / p`; `n_max` is doubled until that is below
/// `tail_epsilon`.
pub fn brute_force_normalized_mae(
    successes: SuccessTarget,
    p: Probability,
    tail_epsilon: f64,
) -> Result<f64> {
    if !(tail_epsilon > 0.0 && tail_epsilon <= 1e-6) {
        return Err(Error::domain(format!(
            "tail_epsilon must lie in (0, 1e-6], got {tail_epsilon}"
        )));
    }
    let big_n = successes.get();
    let pf = p.get();
    let mut n_max = (2.0 * successes.as_f64() / pf).ceil() as u64;
    while nbin_sf(big_n, p, n_max)? / pf >= tail_epsilon {
        n_max = n_max.checked_mul(2).ok_or_else(|| {
            Error::domain("brute-force support does not fit in 64 bits")
        })?;
    }
    let m = (big_n - 1) as f64;
    let mut acc = CompensatedSum::new();
    for n in big_n..=n_max {
        let f = nbin_pmf(big_n, p, n)?;
        acc.add(f * (m / (n - 1) as f64 - pf).abs());
    }
    Ok(acc.value() / pf)
}
