//! Negative-binomial and binomial probability functions.
//!
//! `f_N(n)` is the probability that the `N`-th success of a Bernoulli(`p`)
//! sequence arrives on trial `n`. Its distribution function is evaluated
//! through the binomial tail `F_N(n) = P[Bin(n, p) ≥ N]`, summing whichever
//! side of the binomial is smaller, so its cost never grows with `n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{log_binomial, CompensatedSum, LogReal};

/// A success probability strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Probability(p))
        } else {
            Err(Error::InvalidProbability(p))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `ln p`
    #[inline]
    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    /// `ln(1 - p)`
    #[inline]
    pub fn ln_complement(self) -> f64 {
        (-self.0).ln_1p()
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Probability::new(p)
    }
}

/// The number `N ≥ 2` of successes that stops sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuccessTarget(u64);

impl SuccessTarget {
    pub const MIN: u64 = 2;

    pub fn new(n: u64) -> Result<Self> {
        if n >= Self::MIN {
            Ok(SuccessTarget(n))
        } else {
            Err(Error::InvalidSuccessTarget { got: n, min: Self::MIN })
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl fmt::Display for SuccessTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<SuccessTarget> for u64 {
    fn from(n: SuccessTarget) -> u64 {
        n.0
    }
}

impl TryFrom<u64> for SuccessTarget {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        SuccessTarget::new(n)
    }
}

fn check_nbin_args(successes: u64, n: u64) -> Result<()> {
    if successes == 0 {
        return Err(Error::InvalidSuccessTarget { got: 0, min: 1 });
    }
    if n < successes {
        return Err(Error::domain(format!(
            "trial count {n} is below the number of successes {successes}"
        )));
    }
    Ok(())
}

/// `ln b_{n,p}(i)`, unchecked.
pub(crate) fn ln_binom_pmf(n: u64, p: Probability, i: u64) -> f64 {
    // log_binomial only fails for i > n, which callers exclude.
    let ln_c = log_binomial(n, i).map_or(f64::NEG_INFINITY, LogReal::ln);
    ln_c + i as f64 * p.ln() + (n - i) as f64 * p.ln_complement()
}

/// `b_{n,p}(i) = C(n, i) p^i (1 - p)^(n - i)`.
pub fn binom_pmf(n: u64, p: Probability, i: u64) -> Result<f64> {
    if i > n {
        return Err(Error::domain(format!(
            "binomial outcome {i} outside 0..={n}"
        )));
    }
    Ok(ln_binom_pmf(n, p, i).exp())
}

/// Terms between direct log-space re-evaluations in the tail recurrences.
const REFRESH_EVERY: u64 = 256;

/// `(P[X ≤ k], P[X > k])` for `X ~ Bin(n, p)`.
///
/// The side not containing the mean is summed term by term from `k` outward,
/// where the terms decrease monotonically; the other side is its complement.
pub(crate) fn binom_tails(n: u64, p: Probability, k: u64) -> (f64, f64) {
    if k >= n {
        return (1.0, 0.0);
    }
    let pf = p.get();
    let odds = pf / (1.0 - pf);
    if (k as f64) < n as f64 * pf {
        // Lower side: i = k, k-1, ..., 0.
        let mut sum = CompensatedSum::new();
        let mut term = ln_binom_pmf(n, p, k).exp();
        let mut i = k;
        loop {
            sum.add(term);
            if i == 0 || term <= sum.value() * 1e-18 {
                break;
            }
            if (k - i + 1) % REFRESH_EVERY == 0 {
                term = ln_binom_pmf(n, p, i - 1).exp();
            } else {
                term *= i as f64 / ((n - i + 1) as f64 * odds);
            }
            i -= 1;
        }
        let lower = sum.value().min(1.0);
        (lower, 1.0 - lower)
    } else {
        // Upper side: i = k+1, ..., n.
        let mut sum = CompensatedSum::new();
        let mut i = k + 1;
        let mut term = ln_binom_pmf(n, p, i).exp();
        loop {
            sum.add(term);
            if i == n || term <= sum.value() * 1e-18 {
                break;
            }
            if (i - k) % REFRESH_EVERY == 0 {
                term = ln_binom_pmf(n, p, i + 1).exp();
            } else {
                term *= (n - i) as f64 * odds / (i + 1) as f64;
            }
            i += 1;
        }
        let upper = sum.value().min(1.0);
        (1.0 - upper, upper)
    }
}

/// `f_N(n) = C(n - 1, N - 1) p^N (1 - p)^(n - N)`, the probability that the
/// `N`-th success occurs on trial `n`.
///
/// `successes` may be any `N ≥ 1`; `N = 1` is the geometric distribution.
pub fn nbin_pmf(successes: impl Into<u64>, p: Probability, n: u64) -> Result<f64> {
    let r = successes.into();
    check_nbin_args(r, n)?;
    Ok(ln_nbin_pmf(r, p, n).exp())
}

pub(crate) fn ln_nbin_pmf(r: u64, p: Probability, n: u64) -> f64 {
    let ln_c = log_binomial(n - 1, r - 1).map_or(f64::NEG_INFINITY, LogReal::ln);
    ln_c + r as f64 * p.ln() + (n - r) as f64 * p.ln_complement()
}

/// `F_N(n) = P[N-th success by trial n] = P[Bin(n, p) ≥ N]`.
pub fn nbin_cdf(successes: impl Into<u64>, p: Probability, n: u64) -> Result<f64> {
    let r = successes.into();
    check_nbin_args(r, n)?;
    Ok(binom_tails(n, p, r - 1).1)
}

/// `1 - F_N(n) = P[Bin(n, p) ≤ N - 1]`, without cancellation.
pub fn nbin_sf(successes: impl Into<u64>, p: Probability, n: u64) -> Result<f64> {
    let r = successes.into();
    check_nbin_args(r, n)?;
    Ok(binom_tails(n, p, r - 1).0)
}

/// Upper bound on `Σ_{m > n} f_N(m)` from the term ratio.
///
/// `f_N(m + 1) / f_N(m) = m (1 - p) / (m - N + 1)` decreases in `m`, so once
/// it is below one the remaining mass is dominated by a geometric series.
/// Returns 1 when the ratio at `n + 1` is still at least one.
pub fn nbin_tail_bound(successes: impl Into<u64>, p: Probability, n: u64) -> Result<f64> {
    let r = successes.into();
    check_nbin_args(r, n)?;
    let m = n + 1;
    let ratio = m as f64 * (1.0 - p.get()) / (m - r + 1) as f64;
    if ratio >= 1.0 {
        return Ok(1.0);
    }
    Ok((ln_nbin_pmf(r, p, m).exp() / (1.0 - ratio)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mae::threshold_n0;
    use proptest::prelude::*;

    fn prob(p: f64) -> Probability {
        Probability::new(p).unwrap()
    }

    /// Enumerates every Bernoulli string of the given length.
    fn enumerate_first_passage(successes: u32, p: f64, n: u32) -> f64 {
        (0u32..(1 << n))
            .filter(|bits| {
                // The n-th trial is the `successes`-th success.
                bits.count_ones() == successes && bits & (1 << (n - 1)) != 0
            })
            .map(|bits| {
                let k = bits.count_ones() as i32;
                p.powi(k) * (1.0 - p).powi(n as i32 - k)
            })
            .sum()
    }

    #[test]
    fn probability_rejects_closed_endpoints() {
        assert!(Probability::new(0.0).is_err());
        assert!(Probability::new(1.0).is_err());
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert!(Probability::new(0.3).is_ok());
    }

    #[test]
    fn success_target_needs_two() {
        assert_eq!(
            SuccessTarget::new(1),
            Err(Error::InvalidSuccessTarget { got: 1, min: 2 })
        );
        assert_eq!(SuccessTarget::new(2).unwrap().get(), 2);
    }

    #[test]
    fn nbin_pmf_examples() {
        assert!((nbin_pmf(3u64, prob(0.4), 3).unwrap() - 0.064).abs() < 1e-15);
        assert!((nbin_pmf(2u64, prob(0.5), 3).unwrap() - 0.25).abs() < 1e-15);
        assert!((nbin_pmf(2u64, prob(0.5), 2).unwrap() - 0.25).abs() < 1e-15);
        assert!((enumerate_first_passage(2, 0.5, 3) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn nbin_pmf_matches_enumeration() {
        for r in 1..=4u32 {
            for n in r..=12 {
                for p in [0.1, 0.37, 0.5, 0.8] {
                    let got = nbin_pmf(r as u64, prob(p), n as u64).unwrap();
                    let want = enumerate_first_passage(r, p, n);
                    assert!((got - want).abs() <= 1e-13 * want, "r={r} n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn nbin_domain_errors() {
        assert!(nbin_pmf(3u64, prob(0.5), 2).is_err());
        assert!(nbin_cdf(3u64, prob(0.5), 2).is_err());
        assert!(nbin_sf(0u64, prob(0.5), 2).is_err());
        assert!(binom_pmf(3, prob(0.5), 4).is_err());
    }

    #[test]
    fn nbin_cdf_examples() {
        assert!((nbin_cdf(2u64, prob(0.5), 2).unwrap() - 0.25).abs() < 1e-15);
        assert!((nbin_cdf(2u64, prob(0.5), 3).unwrap() - 0.5).abs() < 1e-15);
        assert!(nbin_cdf(2u64, prob(0.5), 200).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn binom_pmf_examples() {
        assert!((binom_pmf(4, prob(0.5), 2).unwrap() - 0.375).abs() < 1e-15);
        let q = 0.7f64;
        assert!((binom_pmf(9, prob(0.3), 0).unwrap() - q.powi(9)).abs() < 1e-15);
        // 120 * 0.027 * 0.0823543
        let exact = 120.0 * 0.027 * 0.082_354_3;
        assert!((binom_pmf(10, prob(0.3), 3).unwrap() - exact).abs() < 1e-14);
        assert!((exact - 0.266_827_932).abs() < 1e-9);
    }

    #[test]
    fn cdf_equals_pmf_partial_sums() {
        for r in [1u64, 2, 5, 10] {
            for p in [0.05, 0.3, 0.5, 0.9] {
                let mut acc = 0.0;
                for n in r..r + 400 {
                    acc += nbin_pmf(r, prob(p), n).unwrap();
                    let cdf = nbin_cdf(r, prob(p), n).unwrap();
                    assert!((cdf - acc).abs() < 1e-12, "r={r} p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn cdf_differences_are_pmf() {
        for r in [2u64, 3, 7] {
            for p in [0.001, 0.01, 0.2, 0.6] {
                let p = prob(p);
                let mut prev = nbin_cdf(r, p, r).unwrap();
                for n in (r + 1..=10_000).step_by(7) {
                    let cur = nbin_cdf(r, p, n).unwrap();
                    let before = nbin_cdf(r, p, n - 1).unwrap();
                    let f = nbin_pmf(r, p, n).unwrap();
                    assert!((cur - before - f).abs() < 1e-12, "r={r} n={n}");
                    assert!(cur >= prev);
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn cdf_and_sf_are_complementary() {
        for (r, p, n) in [(2u64, 0.5, 3u64), (10, 0.01, 500), (10, 0.01, 5000), (50, 0.9, 52)] {
            let c = nbin_cdf(r, prob(p), n).unwrap();
            let s = nbin_sf(r, prob(p), n).unwrap();
            assert!((c + s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_handles_huge_trial_counts() {
        // Bin(1e9, 1e-6) has mean 1000; P[X >= 1000] is close to one half.
        let f = nbin_cdf(1000u64, prob(1e-6), 1_000_000_000).unwrap();
        assert!(f > 0.49 && f < 0.51, "{f}");
        // Far lower tail: essentially certain to have 1000 successes.
        let f = nbin_cdf(1000u64, prob(1e-6), 2_000_000_000).unwrap();
        assert!(f > 1.0 - 1e-15);
    }

    #[test]
    fn normalization_with_tail_rule() {
        for r in 1..=10u64 {
            for i in 1..=9 {
                let p = prob(i as f64 / 10.0);
                let mut mass = CompensatedSum::new();
                let mut n = r;
                loop {
                    mass.add(nbin_pmf(r, p, n).unwrap());
                    let tail = nbin_tail_bound(r, p, n).unwrap();
                    if tail < 1e-14 * mass.value() {
                        let total = mass.value() + tail;
                        assert!(total >= 1.0 - 1e-12, "r={r} p={p}: {total}");
                        assert!(mass.value() <= 1.0 + 1e-12);
                        break;
                    }
                    n += 1;
                }
            }
        }
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        for (r, p, n) in [(1u64, 0.3, 10u64), (3, 0.2, 40), (10, 0.5, 40), (5, 0.05, 300)] {
            let bound = nbin_tail_bound(r, prob(p), n).unwrap();
            let tail = nbin_sf(r, prob(p), n).unwrap();
            assert!(bound >= tail, "r={r} p={p} n={n}: {bound} < {tail}");
        }
    }

    #[test]
    fn derivation_identity() {
        // F_{N-1}(n0 - 1) = F_N(n0) + (1 - p) b_{n0-1,p}(N - 1)
        for big_n in 2..=30u64 {
            for p in [0.001, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.95, 0.99] {
                let pp = prob(p);
                let n0 = threshold_n0(SuccessTarget::new(big_n).unwrap(), pp);
                let lhs = nbin_cdf(big_n - 1, pp, n0 - 1).unwrap();
                let rhs = nbin_cdf(big_n, pp, n0).unwrap()
                    + (1.0 - p) * binom_pmf(n0 - 1, pp, big_n - 1).unwrap();
                assert!((lhs - rhs).abs() < 1e-11, "N={big_n} p={p}");
            }
        }
    }

    #[test]
    fn pmf_recurrence_identity() {
        // f_N(n) / (n - 1) = p f_{N-1}(n - 1) / (N - 1)
        for r in 3..=12u64 {
            for p in [0.02, 0.25, 0.5, 0.85] {
                let pp = prob(p);
                for n in r + 1..r + 200 {
                    let lhs = nbin_pmf(r, pp, n).unwrap() / (n - 1) as f64;
                    let rhs = p * nbin_pmf(r - 1, pp, n - 1).unwrap() / (r - 1) as f64;
                    if rhs > 1e-290 {
                        assert!(((lhs - rhs) / rhs).abs() < 1e-12, "r={r} p={p} n={n}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn binomial_tails_sum_to_one(n in 1u64..5000, k_frac in 0.0f64..1.0, p in 0.001f64..0.999) {
            let k = ((n as f64) * k_frac) as u64;
            let (lo, hi) = binom_tails(n, prob(p), k);
            prop_assert!((lo + hi - 1.0).abs() < 1e-14);
            prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }

        #[test]
        fn cdf_monotone_in_trials(r in 1u64..30, p in 0.01f64..0.99, n in 0u64..500) {
            let a = nbin_cdf(r, prob(p), r + n).unwrap();
            let b = nbin_cdf(r, prob(p), r + n + 1).unwrap();
            prop_assert!(b >= a - 1e-15);
        }
    }
}
