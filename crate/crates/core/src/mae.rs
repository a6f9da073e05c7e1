//! Exact normalized mean absolute error of `p̂ = (N - 1) / (n - 1)`, its
//! small-`p` limit `α_N`, and the power-series coefficients whose
//! positivity keeps the error below that limit.
//!
//! With `n0 = floor((N - 1) / p) + 1`, the trials `n ≤ n0` are exactly those
//! on which the estimator overshoots `p`, and
//!
//! ```text
//! E|p̂ - p| / p = 2 C(n0 - 1, N - 1) p^(N-1) (1 - p)^(n0 - N + 1)
//!             < α_N = 2 e^(-(N-1)) (N - 1)^(N-2) / (N - 2)!
//! ```
//!
//! The left side is continuous in `p` and strictly decreasing, approaching
//! `α_N` as `p → 0`.

use crate::distributions::{Probability, SuccessTarget};
use crate::error::{Error, Result};
use crate::numeric::{
    as_guarded_integer, guarded_floor, log_binomial, stirlerr, CompensatedSum, LogReal, LN_SQRT_2PI,
};

/// Exact normalized MAE together with the threshold trial count it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaeResult {
    pub normalized_mae: f64,
    pub n0: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficient {
    pub j: u32,
    pub value: f64,
}

/// The closed form of `x` and a truncated power series for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub closed_form: f64,
    pub partial_sum: f64,
    /// Upper bound on the omitted terms `Σ_{j > j_max} x_j p^j`.
    pub tail_bound: f64,
    pub j_max: u32,
}

/// `n0 = floor((N - 1) / p) + 1`, with the knot-point guard applied to the
/// quotient.
pub fn threshold_n0(successes: SuccessTarget, p: Probability) -> u64 {
    let q = (successes.as_f64() - 1.0) / p.get();
    guarded_floor(q) as u64 + 1
}

/// `ln` of the normalized MAE as a single combined log expression.
fn ln_normalized_mae(successes: SuccessTarget, p: Probability, n0: u64) -> f64 {
    let big_n = successes.get();
    let ln_c = log_binomial(n0 - 1, big_n - 1)
        .map(LogReal::ln)
        .expect("n0 >= N by construction");
    std::f64::consts::LN_2
        + ln_c
        + (big_n - 1) as f64 * p.ln()
        + (n0 - big_n + 1) as f64 * p.ln_complement()
}

/// `E|p̂ - p| / p` in closed form.
pub fn exact_normalized_mae(successes: SuccessTarget, p: Probability) -> MaeResult {
    let n0 = threshold_n0(successes, p);
    MaeResult {
        normalized_mae: ln_normalized_mae(successes, p, n0).exp(),
        n0,
    }
}

/// `ln α_N`.
///
/// With `m = N - 1` and `(N - 2)! = m! / m`, the Stirling expansion of `m!`
/// cancels analytically against `e^(-m) m^(m-1)`, leaving
/// `ln α_N = ln 2 - ln sqrt(2π m) - stirlerr(m)`.
pub fn ln_alpha(successes: SuccessTarget) -> f64 {
    let m = successes.as_f64() - 1.0;
    std::f64::consts::LN_2 - 0.5 * m.ln() - LN_SQRT_2PI - stirlerr(m)
}

/// `α_N = 2 e^(-(N-1)) (N - 1)^(N-2) / (N - 2)!`, the limit of the
/// normalized MAE as `p → 0` and its upper bound for every `p`.
pub fn alpha(successes: SuccessTarget) -> f64 {
    ln_alpha(successes).exp()
}

/// `exact_normalized_mae(N, p) - α_N`; negative, and vanishing as `p → 0`.
pub fn mae_limit_check(successes: SuccessTarget, p_small: Probability) -> f64 {
    exact_normalized_mae(successes, p_small).normalized_mae - alpha(successes)
}

/// `Σ_{i=1}^{N-2} (i / (N - 1))^(j+1)`.
///
/// Uses the exact integer power sum while it fits in 128 bits.
fn normalized_power_sum(successes: SuccessTarget, j: u32) -> f64 {
    let m = successes.get() - 1;
    let exponent = j + 1;
    let exact = (1..m).try_fold(0u128, |acc, i| {
        (i as u128)
            .checked_pow(exponent)
            .and_then(|t| acc.checked_add(t))
    });
    let denom = (m as u128).checked_pow(exponent);
    match (exact, denom) {
        (Some(s), Some(d)) => s as f64 / d as f64,
        _ => {
            let mf = m as f64;
            (1..m)
                .map(|i| (i as f64 / mf).powi(exponent as i32))
                .collect::<CompensatedSum>()
                .value()
        }
    }
}

/// `x_j = Σ_{i=1}^{N-2} i^(j+1) / ((j + 1)(N - 1)^(j+1)) + (N - 1)/(j + 2) - (N - 2)/(j + 1)`.
///
/// The last two terms are combined into `(j + 3 - N) / ((j + 1)(j + 2))` so
/// their difference is exact.
pub fn series_coefficient(successes: SuccessTarget, j: u32) -> SeriesCoefficient {
    let jf = j as f64;
    let power_term = normalized_power_sum(successes, j) / (jf + 1.0);
    let rational = (jf + 3.0 - successes.as_f64()) / ((jf + 1.0) * (jf + 2.0));
    SeriesCoefficient {
        j,
        value: power_term + rational,
    }
}

/// Evaluates `x = (1/p) ln(α_N / MAE(p))` in closed form and as the partial
/// series `Σ_{j=0}^{j_max} x_j p^j`.
///
/// The closed form only holds where `(N - 1) / p` is an integer, so other
/// `p` are rejected.
pub fn series_sum(successes: SuccessTarget, p: Probability, j_max: u32) -> Result<SeriesSum> {
    let m = successes.as_f64() - 1.0;
    let pf = p.get();
    let Some(q) = as_guarded_integer(m / pf) else {
        return Err(Error::domain(format!(
            "(N - 1) / p = {} is not an integer",
            m / pf
        )));
    };
    let q = q as f64;

    let mut log_terms = CompensatedSum::new();
    for i in 1..successes.get() - 1 {
        log_terms.add((-(i as f64) * pf / m).ln_1p());
    }
    let closed_form =
        -log_terms.value() / pf - (q - m + 1.0) * p.ln_complement() / pf - q;

    let mut partial = CompensatedSum::new();
    let mut power = 1.0;
    for j in 0..=j_max {
        partial.add(series_coefficient(successes, j).value * power);
        power *= pf;
    }
    // x_j ≤ (N - 1) / (j + 1)
    let tail_bound = m / (j_max as f64 + 2.0) * power / (1.0 - pf);

    Ok(SeriesSum {
        closed_form,
        partial_sum: partial.value(),
        tail_bound,
        j_max,
    })
}
