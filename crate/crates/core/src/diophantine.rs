//! Continued fractions, certified prefixes of real constants, convergent
//! tables and the convergent-growth estimate of the irrationality exponent.
//!
//! For an irrational `α` with convergent denominators `q_k`,
//! `μ(α) = 1 + limsup ln q_{k+1} / ln q_k`. [`estimate_mu`] reports the
//! maximum of that ratio over a finite window, so it is a finite-sample view
//! of the limsup and nothing more.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::{Enclosure, Rational};
use crate::series::{eval_f, eval_s, Base};

/// Default number of certified quotients requested from a constant.
pub const DEFAULT_QUOTIENTS: usize = 64;

/// Default first index of the ratio window; small `q_k` give noisy ratios.
pub const DEFAULT_WINDOW_START: usize = 10;

/// A finite sequence of partial quotients `[a0; a1, a2, …]` with `a_i ≥ 1`
/// for `i ≥ 1`.
///
/// The expansion of a rational produced by [`cf_of_rational`] is canonical:
/// its final quotient is at least 2 whenever there are two or more
/// quotients. Prefixes of infinite expansions may end in 1 and are still
/// valid values of this type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ContinuedFraction {
    quotients: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn new(quotients: Vec<BigInt>) -> Result<Self> {
        if let Some(index) = quotients.iter().skip(1).position(|a| !a.is_positive()) {
            return Err(Error::NonPositiveQuotient { index: index + 1 });
        }
        Ok(ContinuedFraction { quotients })
    }

    /// `n` quotients all equal to 1: the start of the golden ratio's expansion.
    pub fn golden(n: usize) -> Self {
        ContinuedFraction {
            quotients: vec![BigInt::one(); n],
        }
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.quotients.len() < 2 || self.quotients.last().is_some_and(|a| *a >= BigInt::from(2))
    }

    /// The first `n` quotients (or all of them).
    pub fn truncated(&self, n: usize) -> Self {
        ContinuedFraction {
            quotients: self.quotients[..n.min(self.len())].to_vec(),
        }
    }

    /// Whether `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &ContinuedFraction) -> bool {
        other.quotients.starts_with(&self.quotients)
    }

    /// The rational `[a0; a1, …, an]`, `None` when empty.
    pub fn value(&self) -> Option<Rational> {
        let (last, rest) = self.quotients.split_last()?;
        let mut acc = Rational::from_integer(last.clone());
        for a in rest.iter().rev() {
            acc = Rational::from_integer(a.clone()) + acc.recip();
        }
        Some(acc)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.quotients.iter().enumerate() {
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "; {a}")?,
                _ => write!(f, ", {a}")?,
            }
        }
        f.write_str("]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "continued fraction",
            input: s.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?
            .trim();
        if inner.is_empty() {
            return Ok(ContinuedFraction::default());
        }
        let (head, tail) = match inner.split_once(';') {
            Some((h, t)) => (h, Some(t)),
            None => (inner, None),
        };
        let mut quotients = vec![head.trim().parse::<BigInt>().map_err(|_| err())?];
        if let Some(tail) = tail {
            for part in tail.split(',') {
                quotients.push(part.trim().parse().map_err(|_| err())?);
            }
        }
        ContinuedFraction::new(quotients).map_err(|_| err())
    }
}

impl Serialize for ContinuedFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Lazily expands a rational by the Euclidean algorithm. Each item carries
/// the quotient and whether it is the final one.
struct Quotients {
    num: BigInt,
    den: BigInt,
}

impl Quotients {
    fn new(x: &Rational) -> Self {
        Quotients {
            num: x.numer().clone(),
            den: x.denom().clone(),
        }
    }
}

impl Iterator for Quotients {
    type Item = (BigInt, bool);

    fn next(&mut self) -> Option<Self::Item> {
        if self.den.is_zero() {
            return None;
        }
        let (a, r) = self.num.div_mod_floor(&self.den);
        self.num = std::mem::replace(&mut self.den, r);
        Some((a, self.den.is_zero()))
    }
}

/// Canonical continued fraction of `x`.
pub fn cf_of_rational(x: &Rational) -> ContinuedFraction {
    ContinuedFraction {
        quotients: Quotients::new(x).map(|(a, _)| a).collect(),
    }
}

/// Quotients shared by the expansions of every real in `[lo, hi]`.
///
/// Both endpoint expansions lose their final quotient, then the longest
/// common prefix is kept. Each endpoint then lies strictly inside the
/// cylinder of that prefix, and cylinders are intervals, so the whole
/// enclosure does too. The endpoints are expanded in lockstep and the
/// expansion stops at the first disagreement.
pub fn certified_cf_prefix(e: &Enclosure) -> ContinuedFraction {
    let quotients = Quotients::new(e.lo())
        .zip(Quotients::new(e.hi()))
        .map_while(|((a, a_last), (b, b_last))| (!a_last && !b_last && a == b).then_some(a))
        .collect();
    ContinuedFraction { quotients }
}

/// Convergents `p_k / q_k` of a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTable {
    entries: Vec<(BigInt, BigInt)>,
}

impl ConvergentTable {
    pub fn entries(&self) -> &[(BigInt, BigInt)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn convergent(&self, k: usize) -> Option<Rational> {
        self.entries
            .get(k)
            .map(|(p, q)| Rational::new(p.clone(), q.clone()))
    }

    pub fn last(&self) -> Option<Rational> {
        self.len().checked_sub(1).and_then(|k| self.convergent(k))
    }

    pub fn denominators(&self) -> impl Iterator<Item = &BigInt> {
        self.entries.iter().map(|(_, q)| q)
    }
}

impl Serialize for ConvergentTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.entries.iter().map(|(p, q)| format!("{p}/{q}")))
    }
}

/// `p_k = a_k p_{k-1} + p_{k-2}`, `q_k = a_k q_{k-1} + q_{k-2}` from
/// `p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1`.
pub fn convergents(cf: &ContinuedFraction) -> Result<ConvergentTable> {
    if cf.is_empty() {
        return Err(Error::EmptyContinuedFraction);
    }
    let mut entries = Vec::with_capacity(cf.len());
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    for a in cf.quotients() {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        entries.push((p.clone(), q.clone()));
    }
    Ok(ConvergentTable { entries })
}

/// Natural logarithm of a positive big integer, accurate to double
/// precision relative error.
pub fn ln_big(x: &BigInt) -> f64 {
    debug_assert_eq!(x.sign(), Sign::Plus);
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `x ≈ mantissa · 2^exponent` with the mantissa taken from the top 64 bits.
fn split_big(x: &BigInt) -> (f64, i64) {
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).to_f64().expect("64-bit value");
    (top, shift as i64)
}

/// `ln(num/den)` for `num > den > 0`. Close ratios go through `ln_1p` of the
/// exact difference so that the result stays positive and accurate.
fn ln_quotient(num: &BigInt, den: &BigInt) -> f64 {
    let diff = num - den;
    if diff.bits() + 2 < den.bits() {
        let (md, ed) = split_big(&diff);
        let (mq, eq) = split_big(den);
        let t = (md / mq) * 2f64.powi((ed - eq).clamp(-2000, 2000) as i32);
        t.ln_1p()
    } else {
        ln_big(num) - ln_big(den)
    }
}

/// `ln q_{k+1} / ln q_k - 1 = ln(q_{k+1}/q_k) / ln q_k`, computed without
/// cancellation.
fn growth_excess(next: &BigInt, current: &BigInt) -> f64 {
    ln_quotient(next, current) / ln_big(current)
}

/// `base + excess`, rounded up to the next double when the excess is below
/// the spacing at `base`. The excess is known to be strictly positive, so
/// the sum is never reported as `base` itself.
fn above(base: f64, excess: f64) -> f64 {
    let sum = base + excess;
    if sum > base {
        sum
    } else {
        base.next_up()
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn serialize_round6<S: Serializer>(x: &f64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_f64(round6(*x))
}

/// One growth ratio `ln q_{k+1} / ln q_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRatio {
    pub k: usize,
    #[serde(serialize_with = "serialize_round6")]
    pub ratio: f64,
}

/// Windowed convergent-growth estimate of the irrationality exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuEstimate {
    pub window_start: usize,
    pub ratios: Vec<GrowthRatio>,
    /// `1 + max ratio`.
    #[serde(serialize_with = "serialize_round6")]
    pub mu_hat: f64,
    /// Smallest `k` attaining the maximum.
    pub argmax: usize,
}

impl fmt::Display for MuEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>12}", "k", "ln q(k+1)/ln q(k)")?;
        for r in &self.ratios {
            let mark = if r.k == self.argmax { "  <- max" } else { "" };
            writeln!(f, "{:>6}  {:>12.6}{mark}", r.k, r.ratio)?;
        }
        write!(
            f,
            "mu_hat = {:.6} (window from k = {})",
            self.mu_hat, self.window_start
        )
    }
}

/// Index of the first maximum.
fn first_max(values: &[f64]) -> usize {
    (1..values.len()).fold(0, |best, i| if values[i] > values[best] { i } else { best })
}

/// `1 + max_{k0 ≤ k < K} ln q_{k+1} / ln q_k` where `K` is the last index.
pub fn estimate_mu(cf: &ContinuedFraction, window_start: usize) -> Result<MuEstimate> {
    let needed = window_start + 2;
    if cf.len() < needed {
        return Err(Error::WindowTooShort {
            quotients: cf.len(),
            needed,
            window_start,
        });
    }
    let table = convergents(cf)?;
    let q: Vec<&BigInt> = table.denominators().collect();
    if *q[window_start] < BigInt::from(2) {
        return Err(Error::DegenerateWindow {
            window_start,
            denominator: q[window_start].to_string(),
        });
    }
    let excess: Vec<f64> = q[window_start..]
        .windows(2)
        .map(|w| growth_excess(w[1], w[0]))
        .collect();
    let ratios: Vec<GrowthRatio> = excess
        .iter()
        .enumerate()
        .map(|(i, &e)| GrowthRatio {
            k: window_start + i,
            ratio: above(1.0, e),
        })
        .collect();
    let best = first_max(&excess);
    Ok(MuEstimate {
        window_start,
        mu_hat: above(2.0, excess[best]),
        argmax: window_start + best,
        ratios,
    })
}

/// Constants whose expansion [`estimate_mu_for_constant`] can certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Constant {
    /// `F(1/b) = Σ 1/(b^{2^n} + 1)`.
    F,
    /// `S(1/b) = Σ s₂(n)/bⁿ`.
    S,
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constant::F => "F",
            Constant::S => "S",
        })
    }
}

/// How far to push truncations while looking for certified quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthPolicy {
    /// Certified quotients required; the estimate uses exactly this many.
    pub quotients: usize,
    pub window_start: usize,
    /// Largest `F` truncation tried (terms are added one at a time).
    pub max_f_terms: u32,
    /// First `S` truncation tried; doubled until certified or capped.
    pub initial_s_terms: u64,
    pub max_s_terms: u64,
}

impl Default for DepthPolicy {
    fn default() -> Self {
        DepthPolicy {
            quotients: DEFAULT_QUOTIENTS,
            window_start: DEFAULT_WINDOW_START,
            max_f_terms: 16,
            initial_s_terms: 32,
            max_s_terms: 1 << 16,
        }
    }
}

/// A certified prefix of a constant and the growth estimate computed on it.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantEstimate {
    pub base: Base,
    pub constant: Constant,
    /// Truncation depth that produced the enclosure.
    pub terms: u64,
    pub enclosure: Enclosure,
    /// Length of the full certified prefix at that depth.
    pub certified_len: usize,
    /// The first `policy.quotients` certified quotients.
    pub prefix: ContinuedFraction,
    pub estimate: MuEstimate,
}

fn certify_depth(
    policy: &DepthPolicy,
    mut depths: impl Iterator<Item = u64>,
    enclose: impl Fn(u64) -> Result<Enclosure>,
) -> Result<(u64, Enclosure, ContinuedFraction)> {
    let mut best = (0, 0);
    loop {
        let Some(terms) = depths.next() else {
            return Err(Error::InsufficientQuotients {
                got: best.1,
                wanted: policy.quotients,
                terms: best.0,
            });
        };
        let enclosure = enclose(terms)?;
        let prefix = certified_cf_prefix(&enclosure);
        if prefix.len() >= policy.quotients {
            return Ok((terms, enclosure, prefix));
        }
        best = (terms, prefix.len());
    }
}

/// Deepen the truncation of `F(1/b)` or `S(1/b)` until its enclosure
/// certifies `policy.quotients` quotients, then estimate the exponent on
/// exactly those quotients.
pub fn estimate_mu_for_constant(
    b: Base,
    constant: Constant,
    policy: &DepthPolicy,
) -> Result<ConstantEstimate> {
    let (terms, enclosure, full) = match constant {
        Constant::F => certify_depth(policy, 1..=u64::from(policy.max_f_terms), |n| {
            eval_f(b, n as u32)
        })?,
        Constant::S => {
            let start = policy.initial_s_terms.max(1);
            let max = policy.max_s_terms;
            let depths = std::iter::successors(Some(start), |&n| n.checked_mul(2))
                .take_while(move |&n| n <= max);
            certify_depth(policy, depths, |n| eval_s(b, n))?
        }
    };
    let prefix = full.truncated(policy.quotients);
    let estimate = estimate_mu(&prefix, policy.window_start)?;
    Ok(ConstantEstimate {
        base: b,
        constant,
        terms,
        enclosure,
        certified_len: full.len(),
        prefix,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cf(s: &str) -> ContinuedFraction {
        s.parse().unwrap()
    }

    #[test]
    fn expansions_of_rationals() {
        assert_eq!(cf_of_rational(&q(5, 1)), cf("[5]"));
        assert_eq!(cf_of_rational(&q(8, 15)), cf("[0; 1, 1, 7]"));
        assert_eq!(cf_of_rational(&q(10, 7)), cf("[1; 2, 3]"));
        assert_eq!(cf_of_rational(&q(-7, 3)), cf("[-3; 1, 2]"));
        assert_eq!(cf_of_rational(&q(0, 1)), cf("[0]"));
        assert_eq!(cf_of_rational(&q(1, 2)), cf("[0; 2]"));
    }

    #[test]
    fn text_form() {
        assert_eq!(cf("[0;1,1,7]").to_string(), "[0; 1, 1, 7]");
        assert_eq!(cf("[5]").to_string(), "[5]");
        assert_eq!(ContinuedFraction::default().to_string(), "[]");
        assert!("[1; 0]".parse::<ContinuedFraction>().is_err());
        assert!("1; 2".parse::<ContinuedFraction>().is_err());
        assert_eq!(
            ContinuedFraction::new(vec![1.into(), 2.into(), (-1).into()]),
            Err(Error::NonPositiveQuotient { index: 2 })
        );
        assert!(cf("[1; 2, 1]").value().is_some());
        assert!(!cf("[1; 2, 1]").is_canonical());
        assert!(cf("[1]").is_canonical());
    }

    #[test]
    fn prefixes() {
        let e = Enclosure::new("√2", q(141, 100), q(71, 50)).unwrap();
        assert_eq!(cf_of_rational(&q(141, 100)), cf("[1; 2, 2, 3, 1, 1, 2]"));
        assert_eq!(cf_of_rational(&q(71, 50)), cf("[1; 2, 2, 1, 1, 1, 2]"));
        assert_eq!(certified_cf_prefix(&e), cf("[1; 2, 2]"));

        // [0; 3] and [0; 1, 2] lose their last quotients and share only a0
        let e = Enclosure::new("x", q(1, 3), q(2, 3)).unwrap();
        assert_eq!(certified_cf_prefix(&e), cf("[0]"));
        let e = Enclosure::new("x", q(-1, 2), q(1, 2)).unwrap();
        assert_eq!(certified_cf_prefix(&e), cf("[]"));

        let x = q(8, 15);
        let e = Enclosure::new("x", x.clone(), x).unwrap();
        assert_eq!(certified_cf_prefix(&e), cf("[0; 1, 1]"));

        let e = Enclosure::new("x", q(3, 1), q(3, 1)).unwrap();
        assert_eq!(certified_cf_prefix(&e), cf("[]"));
    }

    #[test]
    fn convergent_tables() {
        let t = convergents(&cf("[0; 1, 1, 7]")).unwrap();
        let got: Vec<Rational> = (0..t.len()).map(|k| t.convergent(k).unwrap()).collect();
        assert_eq!(got, vec![q(0, 1), q(1, 1), q(1, 2), q(8, 15)]);
        assert_eq!(convergents(&cf("[5]")).unwrap().last(), Some(q(5, 1)));
        assert_eq!(
            convergents(&cf("[1; 2, 2, 2, 2]")).unwrap().last(),
            Some(q(41, 29))
        );
        assert_eq!(convergents(&cf("[]")), Err(Error::EmptyContinuedFraction));
    }

    #[test]
    fn golden_ratio_calibration() {
        let est = estimate_mu(&ContinuedFraction::golden(30), 5).unwrap();
        assert!(est.mu_hat > 2.0 && est.mu_hat < 2.25, "{}", est.mu_hat);
        // ln 13 / ln 8 is the largest ratio once q_5 = 8
        assert_eq!(est.argmax, 5);
        assert!((est.mu_hat - (1.0 + 13f64.ln() / 8f64.ln())).abs() < 1e-12);
        assert_eq!(est.ratios.len(), 24);
    }

    #[test]
    fn window_errors() {
        assert_eq!(
            estimate_mu(&ContinuedFraction::golden(6), 5),
            Err(Error::WindowTooShort {
                quotients: 6,
                needed: 7,
                window_start: 5
            })
        );
        assert!(matches!(
            estimate_mu(&ContinuedFraction::golden(6), 1),
            Err(Error::DegenerateWindow {
                window_start: 1,
                ..
            })
        ));
        assert!(matches!(
            estimate_mu(&cf("[0; 5, 3]"), 0),
            Err(Error::DegenerateWindow {
                window_start: 0,
                ..
            })
        ));
    }

    #[test]
    fn tie_breaks_to_smallest_index() {
        assert_eq!(first_max(&[0.5, 1.0, 1.0, 0.0]), 1);
        assert_eq!(first_max(&[0.25]), 0);
    }

    #[test]
    fn logarithms_of_huge_integers() {
        let x = BigInt::from(10u8).pow(1000u32);
        let expected = 1000.0 * 10f64.ln();
        assert!((ln_big(&x) - expected).abs() / expected < 1e-14);
        assert_eq!(ln_big(&BigInt::from(1u8)), 0.0);
        assert!((ln_big(&BigInt::from(1u64 << 40)) - 40.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn nearly_equal_denominators_keep_the_ratio_above_one() {
        // q_2 = 2^64, q_3 = 2^64 + 1: the true ratio exceeds 1 by ~1e-21
        let cf =
            ContinuedFraction::new(vec![0.into(), 1.into(), u64::MAX.into(), 1.into()]).unwrap();
        let est = estimate_mu(&cf, 2).unwrap();
        assert!(est.ratios[0].ratio > 1.0);
        assert!(est.mu_hat > 2.0);

        let q = BigInt::from(10u8).pow(40u32);
        let e = growth_excess(&(&q + 1_000_000u32), &q);
        let expected = 1e-34 / (40.0 * 10f64.ln());
        assert!((e - expected).abs() / expected < 1e-12);
        let next = &q * BigInt::from(1000u32);
        assert!((growth_excess(&next, &q) - 3.0 / 40.0).abs() < 1e-14);
    }

    #[test]
    fn serialized_estimate_rounds_to_six_places() {
        let est = estimate_mu(&ContinuedFraction::golden(12), 5).unwrap();
        let json = serde_json::to_string(&est).unwrap();
        assert!(json.contains("\"mu_hat\":2.23348,"), "{json}");
    }
}
