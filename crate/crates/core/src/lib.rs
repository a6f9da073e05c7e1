//! Mean absolute error of the unbiased probability estimator under inverse
//! binomial sampling.
//!
//! Inverse binomial sampling observes Bernoulli trials with unknown success
//! probability `p` until `N` successes have been seen. With `n` the number of
//! trials used, `p̂ = (N - 1) / (n - 1)` is unbiased, and its normalized mean
//! absolute error `E|p̂ - p| / p` has a closed form that stays below a bound
//! depending only on `N`. This crate evaluates that closed form, the bound,
//! the fixed-sample-size counterpart, plans `N` for a target error, and
//! carries the brute-force and Monte-Carlo machinery used to check them.
//!
//! All probability masses are evaluated in log space and exponentiated once,
//! so trial counts up to about `10^12` are handled without overflow.
//!
//! ```
//! use invbin_core::{exact_normalized_mae, plan_mae, Probability, SuccessTarget};
//!
//! let n = SuccessTarget::new(3).unwrap();
//! let p = Probability::new(0.5).unwrap();
//! let mae = exact_normalized_mae(n, p);
//! assert!((mae.normalized_mae - 0.375).abs() < 1e-15);
//! assert_eq!(mae.n0, 5);
//!
//! assert_eq!(plan_mae(0.10).unwrap().successes, 65);
//! ```

mod error;

pub mod distributions;
pub mod fixed_sample;
pub mod mae;
pub mod numeric;
pub mod planner;
pub mod simulate;
pub mod stats;

pub use distributions::{
    binom_pmf, nbin_cdf, nbin_pmf, nbin_sf, nbin_tail_bound, Probability, SuccessTarget,
};
pub use error::{Error, Result};
pub use fixed_sample::{
    asymptotic_ratio, fixed_normalized_mae, matched_sample_size, sequential_vs_fixed_ratio,
    FixedMaeResult,
};
pub use mae::{
    alpha, exact_normalized_mae, mae_limit_check, series_coefficient, series_sum, threshold_n0,
    MaeResult, SeriesCoefficient, SeriesSum,
};
pub use numeric::{log_binomial, log_gamma, LogReal};
pub use planner::{plan, plan_mae, plan_rmse, rmse_bound, Criterion, PlanResult};
pub use simulate::{
    brute_force_normalized_mae, estimate_p, mc_normalized_mae, run_inverse_binomial, McEstimate,
    RunConfig,
};
pub use stats::RunningStats;
