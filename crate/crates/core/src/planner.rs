//! Smallest number of successes guaranteeing a normalized error target for
//! every `p`.
//!
//! MAE plans use the bound `α_N`; RMSE plans use `(N - 2)^(-1/2)`, which
//! follows from `E[(p̂ - p)²] / p² < 1 / (N - 2)` for `N ≥ 3`. Both bounds
//! hold uniformly in `p`, so a plan never depends on the unknown probability.
//! The exact error at any particular `p` is strictly smaller than the bound.

use std::fmt;
use std::str::FromStr;

use crate::distributions::SuccessTarget;
use crate::error::{Error, Result};
use crate::mae::ln_alpha;

/// Plans are not searched beyond this many successes.
pub const MAX_SUCCESSES: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Mae,
    Rmse,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Mae => "mae",
            Criterion::Rmse => "rmse",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mae" => Ok(Criterion::Mae),
            "rmse" => Ok(Criterion::Rmse),
            other => Err(Error::domain(format!("unknown criterion {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanResult {
    pub successes: u64,
    pub achieved_bound: f64,
    pub target: f64,
    pub criterion: Criterion,
}

/// `(N - 2)^(-1/2)`, the normalized RMSE bound; `None` for `N < 3`.
pub fn rmse_bound(successes: SuccessTarget) -> Option<f64> {
    (successes.get() >= 3).then(|| 1.0 / ((successes.get() - 2) as f64).sqrt())
}

fn check_target(target: f64) -> Result<()> {
    if target > 0.0 && target < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "target normalized error must lie in (0, 1), got {target}"
        )))
    }
}

fn target(n: u64) -> SuccessTarget {
    SuccessTarget::new(n).expect("search never goes below N = 2")
}

/// Smallest `N ≥ 2` with `α_N ≤ target`.
///
/// `α_N` is strictly decreasing, so the search doubles an upper bracket and
/// then bisects.
pub fn plan_mae(target_mae: f64) -> Result<PlanResult> {
    check_target(target_mae)?;
    let ln_target = target_mae.ln();
    let meets = |n: u64| ln_alpha(target(n)) <= ln_target;

    let mut lo = SuccessTarget::MIN;
    let successes = if meets(lo) {
        lo
    } else {
        // Invariant: !meets(lo) && meets(hi).
        let mut hi = lo * 2;
        while !meets(hi) {
            if hi >= MAX_SUCCESSES {
                return Err(Error::Unreachable {
                    target: target_mae,
                    limit: MAX_SUCCESSES,
                });
            }
            lo = hi;
            hi = (hi * 2).min(MAX_SUCCESSES);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if meets(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(PlanResult {
        successes,
        achieved_bound: ln_alpha(target(successes)).exp(),
        target: target_mae,
        criterion: Criterion::Mae,
    })
}

/// Smallest `N ≥ 3` with `(N - 2)^(-1/2) ≤ target`, i.e.
/// `N = 2 + ceil(1 / target²)`.
///
/// Any `target ≥ 1` is met by `N = 3`.
pub fn plan_rmse(target_rmse: f64) -> Result<PlanResult> {
    if !(target_rmse > 0.0) || !target_rmse.is_finite() {
        return Err(Error::domain(format!(
            "target normalized error must be positive, got {target_rmse}"
        )));
    }
    let bound = |n: u64| 1.0 / ((n - 2) as f64).sqrt();
    let estimate = 2.0 + (1.0 / (target_rmse * target_rmse)).ceil();
    if estimate > MAX_SUCCESSES as f64 {
        return Err(Error::Unreachable {
            target: target_rmse,
            limit: MAX_SUCCESSES,
        });
    }
    // The closed form can be off by one from rounding in 1 / target².
    let mut n = (estimate as u64).max(3);
    while n > 3 && bound(n - 1) <= target_rmse {
        n -= 1;
    }
    while bound(n) > target_rmse {
        n += 1;
    }
    Ok(PlanResult {
        successes: n,
        achieved_bound: bound(n),
        target: target_rmse,
        criterion: Criterion::Rmse,
    })
}

pub fn plan(target: f64, criterion: Criterion) -> Result<PlanResult> {
    match criterion {
        Criterion::Mae => plan_mae(target),
        Criterion::Rmse => plan_rmse(target),
    }
}
