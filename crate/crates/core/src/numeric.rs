//! Log-domain combinatorics and special functions.
//!
//! `log_gamma` uses the Stirling series with eight correction terms for
//! arguments of at least 10 and shifts smaller arguments up with the
//! recurrence `Γ(x + 1) = x Γ(x)`. Integer arguments up to 171 come from a
//! table of exact-product factorials.
//!
//! `log_binomial` must stay accurate when `n` is of order `10^12` while `k`
//! is small, where `ln Γ(n + 1) - ln Γ(n - k + 1)` would cancel almost every
//! digit. Above the table range it is assembled from Stirling remainders
//! (`stirlerr`) and a `ln_1p` term instead, so every summand is of the same
//! magnitude as the result.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// `ln(sqrt(2π))`
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest `n` whose factorial is finite in `f64`.
const FACTORIAL_TABLE_MAX: usize = 170;

/// Below this, `stirlerr` comes from the factorial table.
const STIRLERR_SERIES_MIN: f64 = 16.0;

/// Stirling series threshold for `log_gamma`.
const STIRLING_MIN: f64 = 10.0;

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=8`.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// The natural logarithm of a nonnegative quantity.
///
/// Zero is represented by negative infinity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogReal(pub f64);

impl LogReal {
    pub const ZERO: LogReal = LogReal(f64::NEG_INFINITY);
    pub const ONE: LogReal = LogReal(0.0);

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl std::ops::Add for LogReal {
    type Output = LogReal;

    /// Log of the product.
    fn add(self, rhs: LogReal) -> LogReal {
        LogReal(self.0 + rhs.0)
    }
}

fn ln_factorial_table() -> &'static [f64; FACTORIAL_TABLE_MAX + 1] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; FACTORIAL_TABLE_MAX + 1];
        let mut fact = 1.0_f64;
        for (k, slot) in table.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            *slot = fact.ln();
        }
        table
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    match usize::try_from(n) {
        Ok(k) if k <= FACTORIAL_TABLE_MAX => ln_factorial_table()[k],
        _ => {
            let x = n as f64;
            stirlerr(x) + (x + 0.5) * x.ln() - x + LN_SQRT_2PI
        }
    }
}

fn stirling_correction(x: f64, terms: usize) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in STIRLING_COEFFS[..terms].iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(x + 1) - [(x + 1/2) ln x - x + ln sqrt(2π)]` for integral `x ≥ 1`.
pub(crate) fn stirlerr(x: f64) -> f64 {
    if x < STIRLERR_SERIES_MIN {
        let n = x as usize;
        ln_factorial_table()[n] - (x + 0.5) * x.ln() + x - LN_SQRT_2PI
    } else {
        // The sixth term is below 1e-17 at x = 16.
        stirling_correction(x, 5)
    }
}

/// `ln Γ(x)` for `x > 0`.
///
/// Relative error is below `1e-13` on `[1, 1e12]` away from the roots at 1
/// and 2, where the absolute error is of order `1e-15` instead.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "log_gamma requires a finite positive argument, got {x}"
        )));
    }
    if x.fract() == 0.0 && x <= (FACTORIAL_TABLE_MAX + 1) as f64 {
        return Ok(ln_factorial_table()[x as usize - 1]);
    }
    if x >= STIRLING_MIN {
        return Ok(log_gamma_stirling(x));
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(log_gamma_stirling(shifted) - product.ln())
}

fn log_gamma_stirling(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x, STIRLING_COEFFS.len())
}

/// `ln C(n, k)`.
pub fn log_binomial(n: u64, k: u64) -> Result<LogReal> {
    if k > n {
        return Err(Error::domain(format!(
            "binomial coefficient C({n}, {k}) needs k <= n"
        )));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(LogReal::ONE);
    }
    if n as usize <= FACTORIAL_TABLE_MAX {
        let t = ln_factorial_table();
        return Ok(LogReal(t[n as usize] - t[k as usize] - t[(n - k) as usize]));
    }
    let nf = n as f64;
    let kf = k as f64;
    let mf = (n - k) as f64;
    // (n + 1/2) ln n - (m + 1/2) ln m = k ln n - (m + 1/2) ln(1 - k/n)
    let value = stirlerr(nf) - stirlerr(kf) - stirlerr(mf) - (mf + 0.5) * (-kf / nf).ln_1p()
        + kf * nf.ln()
        - (kf + 0.5) * kf.ln()
        - LN_SQRT_2PI;
    Ok(LogReal(value))
}

/// Treats `q` as an integer when it is within `1e-9 * max(1, q)` of one.
///
/// Quantities such as `(N - 1) / p` land exactly on integers at the knot
/// points of the error curves, where plain floating-point division can fall
/// on either side.
pub fn snap_to_integer(q: f64) -> f64 {
    let r = q.round();
    if (q - r).abs() < 1e-9 * q.abs().max(1.0) {
        r
    } else {
        q
    }
}

/// `floor(q)` after [`snap_to_integer`].
pub fn guarded_floor(q: f64) -> f64 {
    snap_to_integer(q).floor()
}

/// Returns the integer `q` rounds to when it passes the integrality guard.
pub fn as_guarded_integer(q: f64) -> Option<u64> {
    let s = snap_to_integer(q);
    (s.fract() == 0.0 && s >= 0.0 && s < 2f64.powi(64)).then_some(s as u64)
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
