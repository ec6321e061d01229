//! Binary digit sums, 2-adic valuations and the coefficient sequence
//! `f(n)` of `F(x) = Σ_{m≥0} x^{2^m} / (1 + x^{2^m})`.
//!
//! `f` is available through three routes that share no code:
//!
//! * [`f_multiplicative`]: the prime-power closed form `1 - v₂(n)`,
//! * [`f_difference`]: the digit-sum difference `s₂(n) - s₂(n-1)`,
//! * [`f_series_oracle`] / [`SeriesOracle`]: brute-force expansion of the
//!   generating series.
//!
//! The oracle must stay independent of the other two routes: it never calls
//! [`s2`] or [`v2`] and only adds up `±1` contributions of geometric series.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// A non-negative integer index. Implemented for machine words and for
/// [`BigUint`], so the same routines serve fast sweeps and huge indices.
pub trait Natural {
    fn is_zero(&self) -> bool;
    /// Number of 1-bits.
    fn ones(&self) -> u64;
    /// Number of trailing zero bits, `None` for zero.
    fn trailing_zero_bits(&self) -> Option<u64>;
    /// `self - 1`; only called on non-zero values.
    fn predecessor(&self) -> Self;
}

impl Natural for u64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn ones(&self) -> u64 {
        u64::from(self.count_ones())
    }
    fn trailing_zero_bits(&self) -> Option<u64> {
        (*self != 0).then(|| u64::from(self.trailing_zeros()))
    }
    fn predecessor(&self) -> Self {
        self - 1
    }
}

impl Natural for u128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn ones(&self) -> u64 {
        u64::from(self.count_ones())
    }
    fn trailing_zero_bits(&self) -> Option<u64> {
        (*self != 0).then(|| u64::from(self.trailing_zeros()))
    }
    fn predecessor(&self) -> Self {
        self - 1
    }
}

impl Natural for BigUint {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ones(&self) -> u64 {
        self.iter_u64_digits()
            .map(|d| u64::from(d.count_ones()))
            .sum()
    }
    fn trailing_zero_bits(&self) -> Option<u64> {
        self.trailing_zeros()
    }
    fn predecessor(&self) -> Self {
        self - BigUint::one()
    }
}

/// A value of the coefficient sequence `f(n)`.
///
/// For `n ≥ 1` the value equals `1 - v₂(n) ≤ 1`. Since `v₂(n)` is bounded by
/// the bit length of `n`, a signed 64-bit word holds every reachable value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Coefficient(pub i64);

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Sum of the binary digits of `n`.
pub fn s2<N: Natural>(n: &N) -> u64 {
    n.ones()
}

/// Exponent of the largest power of two dividing `n`.
pub fn v2<N: Natural>(n: &N) -> Result<u64> {
    n.trailing_zero_bits().ok_or(Error::ZeroIndex)
}

/// `f(n)` from multiplicativity: odd prime powers contribute 1 and `2^k`
/// contributes `1 - k`, so `f(n) = 1 - v₂(n)`.
pub fn f_multiplicative<N: Natural>(n: &N) -> Result<Coefficient> {
    let k = v2(n)?;
    Ok(Coefficient(1 - k as i64))
}

/// `f(n) = s₂(n) - s₂(n - 1)`.
pub fn f_difference<N: Natural>(n: &N) -> Result<Coefficient> {
    if n.is_zero() {
        return Err(Error::ZeroIndex);
    }
    let prev = n.predecessor();
    Ok(Coefficient(s2(n) as i64 - s2(&prev) as i64))
}

/// Coefficients of `F(x)` up to `x^cap`, obtained by expanding every
/// `x^{2^m}/(1+x^{2^m}) = Σ_{j≥1} (-1)^{j-1} x^{j·2^m}` with `2^m ≤ cap`
/// and truncating at `cap`.
///
/// This is a reference oracle. It is quadratic-ish in spirit and does not
/// reuse the digit-sum or valuation code.
#[derive(Debug, Clone)]
pub struct SeriesOracle {
    coeffs: Vec<i64>,
}

impl SeriesOracle {
    pub fn expand(cap: usize) -> Self {
        let mut coeffs = vec![0i64; cap + 1];
        let mut step = 1usize;
        while step <= cap {
            let mut sign = 1i64;
            let mut exponent = step;
            while exponent <= cap {
                coeffs[exponent] += sign;
                sign = -sign;
                exponent += step;
            }
            step = match step.checked_mul(2) {
                Some(s) => s,
                None => break,
            };
        }
        SeriesOracle { coeffs }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^n`, for `1 ≤ n ≤ cap`.
    pub fn coefficient(&self, n: u64) -> Result<Coefficient> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        let cap = self.cap() as u64;
        if n > cap {
            return Err(Error::BeyondTruncation { index: n, cap });
        }
        Ok(Coefficient(self.coeffs[n as usize]))
    }

    /// All coefficients `x^0 … x^cap` (the constant term is 0).
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }
}

/// Coefficient of `x^n` in the brute-force expansion of `F(x)` truncated at
/// `degree_cap`. Expands the whole truncation on every call; use
/// [`SeriesOracle`] directly for sweeps.
pub fn f_series_oracle(n: u64, degree_cap: u64) -> Result<Coefficient> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if n > degree_cap {
        return Err(Error::BeyondTruncation {
            index: n,
            cap: degree_cap,
        });
    }
    let cap = usize::try_from(degree_cap).map_err(|_| Error::BeyondTruncation {
        index: n,
        cap: degree_cap,
    })?;
    SeriesOracle::expand(cap).coefficient(n)
}

/// One row of a sweep over `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub s2: u64,
    pub multiplicative: i64,
    pub difference: i64,
    /// `None` when `n` lies beyond the oracle's truncation.
    pub oracle: Option<i64>,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.multiplicative == self.difference && self.oracle.is_none_or(|o| o == self.difference)
    }
}

/// Summary of a cross-check of the three routes over `1..=end`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub end: u64,
    pub oracle_cap: u64,
    pub checked: u64,
    pub oracle_checked: u64,
    pub first_mismatch: Option<SweepRow>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn row(n: u64, oracle: &SeriesOracle) -> SweepRow {
    SweepRow {
        n,
        s2: s2(&n),
        multiplicative: f_multiplicative(&n).expect("n ≥ 1").0,
        difference: f_difference(&n).expect("n ≥ 1").0,
        oracle: oracle.coefficient(n).ok().map(|c| c.0),
    }
}

/// Tabulate `1..=end` with all three routes; the oracle covers `n ≤ oracle_cap`.
pub fn tabulate(end: u64, oracle_cap: u64) -> Result<Vec<SweepRow>> {
    if end == 0 {
        return Err(Error::ZeroIndex);
    }
    let oracle = SeriesOracle::expand(oracle_cap.min(end) as usize);
    Ok((1..=end).map(|n| row(n, &oracle)).collect())
}

/// Cross-check the three routes on `1..=end`, with the oracle restricted to
/// `n ≤ oracle_cap`.
pub fn cross_check(end: u64, oracle_cap: u64) -> Result<SweepSummary> {
    if end == 0 {
        return Err(Error::ZeroIndex);
    }
    let cap = oracle_cap.min(end);
    let oracle = SeriesOracle::expand(cap as usize);
    let first_mismatch = (1..=end).map(|n| row(n, &oracle)).find(|r| !r.agrees());
    Ok(SweepSummary {
        end,
        oracle_cap: cap,
        checked: end,
        oracle_checked: cap,
        first_mismatch,
    })
}
