//! Normalized MAE of the proportion `k / n` from a fixed number of trials,
//! and how inverse binomial sampling compares to it at matched average
//! sample size.

use crate::distributions::{Probability, SuccessTarget};
use crate::error::{Error, Result};
use crate::mae::exact_normalized_mae;
use crate::numeric::{as_guarded_integer, guarded_floor, log_binomial, LogReal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedMaeResult {
    pub normalized_mae: f64,
    /// `floor(n p) + 1`
    pub threshold: u64,
}

/// `E|k/n - p| / p = 2 C(n - 1, N0 - 1) p^(N0-1) (1 - p)^(n - N0 + 1)` with
/// `N0 = floor(n p) + 1`.
pub fn fixed_normalized_mae(n: u64, p: Probability) -> Result<FixedMaeResult> {
    if n == 0 {
        return Err(Error::domain("fixed sample size must be at least 1"));
    }
    // The guard can round n p up to n when p is within 1e-9 of one; the
    // expression is continuous across that knot, so clamp to N0 = n.
    let threshold = (guarded_floor(n as f64 * p.get()) as u64 + 1).min(n);
    let ln_c = log_binomial(n - 1, threshold - 1)?.ln();
    let ln_value = std::f64::consts::LN_2
        + ln_c
        + (threshold - 1) as f64 * p.ln()
        + (n - threshold + 1) as f64 * p.ln_complement();
    Ok(FixedMaeResult {
        normalized_mae: LogReal(ln_value).exp(),
        threshold,
    })
}

/// The fixed sample size `N / p` matching the average inverse-sampling cost,
/// when it is an integer.
pub fn matched_sample_size(successes: SuccessTarget, p: Probability) -> Option<u64> {
    as_guarded_integer(successes.as_f64() / p.get())
}

/// Inverse-sampling normalized MAE divided by the fixed-size one at
/// `n = N / p`.
pub fn sequential_vs_fixed_ratio(successes: SuccessTarget, p: Probability) -> Result<f64> {
    let n = matched_sample_size(successes, p).ok_or_else(|| {
        Error::domain(format!(
            "N / p = {} is not an integer",
            successes.as_f64() / p.get()
        ))
    })?;
    let fixed = fixed_normalized_mae(n, p)?;
    Ok(exact_normalized_mae(successes, p).normalized_mae / fixed.normalized_mae)
}

/// `e (1 + 1/(N - 1))^(-(N - 1))`, the `p → 0` limit of
/// [`sequential_vs_fixed_ratio`].
pub fn asymptotic_ratio(successes: SuccessTarget) -> f64 {
    let m = successes.as_f64() - 1.0;
    (1.0 - m * (1.0 / m).ln_1p()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(p: f64) -> Probability {
        Probability::new(p).unwrap()
    }

    fn n(v: u64) -> SuccessTarget {
        SuccessTarget::new(v).unwrap()
    }

    /// Exhaustive `Σ_k b_{n,p}(k) |k/n - p| / p`, with each term in log space.
    fn exhaustive(size: u64, p: f64) -> f64 {
        (0..=size)
            .map(|k| {
                let ln_b = log_binomial(size, k).unwrap().ln()
                    + k as f64 * p.ln()
                    + (size - k) as f64 * (-p).ln_1p();
                ln_b.exp() * (k as f64 / size as f64 - p).abs() / p
            })
            .sum()
    }

    #[test]
    fn examples() {
        let r = fixed_normalized_mae(4, prob(0.5)).unwrap();
        assert_eq!(r.threshold, 3);
        assert!((r.normalized_mae - 0.375).abs() < 1e-15);
        assert!((exhaustive(4, 0.5) - 0.375).abs() < 1e-15);

        let r = fixed_normalized_mae(1, prob(0.5)).unwrap();
        assert_eq!(r.threshold, 1);
        assert!((r.normalized_mae - 1.0).abs() < 1e-15);

        let r = fixed_normalized_mae(10, prob(0.3)).unwrap();
        assert_eq!(r.threshold, 4);
        let want = exhaustive(10, 0.3);
        assert!(((r.normalized_mae - want) / want).abs() < 1e-12);
    }

    #[test]
    fn zero_size_rejected() {
        assert!(fixed_normalized_mae(0, prob(0.5)).is_err());
    }

    #[test]
    fn matches_exhaustive_expectation() {
        for size in 1..=100 {
            for i in 1..=19 {
                let p = i as f64 * 0.05;
                let got = fixed_normalized_mae(size, prob(p)).unwrap().normalized_mae;
                let want = exhaustive(size, p);
                assert!(((got - want) / want).abs() < 1e-10, "n={size} p={p}");
            }
        }
    }

    #[test]
    fn near_one_clamps_threshold() {
        let r = fixed_normalized_mae(10, prob(1.0 - 1e-12)).unwrap();
        assert_eq!(r.threshold, 10);
        assert!(r.normalized_mae > 0.0 && r.normalized_mae < 1e-10);
    }

    #[test]
    fn ratio_examples() {
        let r = sequential_vs_fixed_ratio(n(2), prob(0.5)).unwrap();
        assert!((r - 0.5 / 0.375).abs() < 1e-14);
        assert!(sequential_vs_fixed_ratio(n(2), prob(0.3)).is_err());
    }

    #[test]
    fn asymptotic_ratio_values() {
        let e = std::f64::consts::E;
        assert!((asymptotic_ratio(n(2)) - e / 2.0).abs() < 1e-15);
        assert!((asymptotic_ratio(n(5)) - e / 1.25f64.powi(4)).abs() < 1e-15);
        assert!((asymptotic_ratio(n(11)) - e / 1.1f64.powi(10)).abs() < 1e-14);
        let mut prev = f64::INFINITY;
        for big_n in 2..2000u64 {
            let r = asymptotic_ratio(n(big_n));
            assert!(r > 1.0 && r < prev);
            prev = r;
        }
        assert!(asymptotic_ratio(n(1_000_000)) - 1.0 < 1e-6);
    }

    #[test]
    fn ratio_converges_to_limit() {
        for big_n in 2..=10u64 {
            let r = sequential_vs_fixed_ratio(n(big_n), prob(1e-4)).unwrap();
            let limit = asymptotic_ratio(n(big_n));
            assert!(((r - limit) / limit).abs() < 0.01, "N={big_n}");
        }
    }

    #[test]
    fn ratio_exceeds_one_on_grid() {
        for big_n in 2..=10u64 {
            for m in 1..=40u64 {
                // p = N / n for n = N * m + small offsets keeps N / p integral.
                let size = big_n * m + 1;
                let p = big_n as f64 / size as f64;
                if p >= 1.0 {
                    continue;
                }
                let r = sequential_vs_fixed_ratio(n(big_n), prob(p)).unwrap();
                assert!(r > 1.0, "N={big_n} n={size}: {r}");
            }
        }
    }
}
