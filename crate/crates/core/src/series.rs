//! Exact partial sums of `F(1/b)`, `S(1/b)`, the Fermat reciprocal series
//! and the Liouville constant, each returned as an [`Enclosure`] of the
//! limit, plus checks of the relation `F(x) = (1 - x)·S(x)`.
//!
//! Everything here is exact rational arithmetic. Tail bounds:
//!
//! * `F`: with `y = b^{-2^N} ≤ 1/2`, the tail `Σ_{n≥N} 1/(b^{2^n}+1)` is below
//!   `Σ_{i≥0} y^{2^i} ≤ y/(1-y) ≤ 2y`.
//! * `S`: `s₂(n) ≤ n`, and `Σ_{n>N} n·x^n = x^{N+1}((N+1) - N·x)/(1-x)^2`,
//!   which at `x = 1/b` is `((N+1)·b - N) / (b^N·(b-1)^2)`.
//! * Liouville: `(J+1+i)! - (J+1)! ≥ i`, so the tail past `J` is below
//!   `10^{-(J+1)!}·Σ 10^{-i} < 2·10^{-(J+1)!}`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{Enclosure, Rational};
use crate::sequences::{s2, SeriesOracle};

/// Largest Fermat index [`fermat_number`] accepts by default; `F_25` has
/// about 2²⁵ bits.
pub const DEFAULT_FERMAT_CAP: u32 = 25;

/// Largest number of terms [`eval_f`] accepts. The last denominator is
/// `b^{2^(terms-1)}`, matching the Fermat cap for `b = 2`.
pub const MAX_F_TERMS: u32 = DEFAULT_FERMAT_CAP + 1;

/// Default precision exponent `P` for [`verify_relation`]: widths below `b^-P`.
pub const DEFAULT_PRECISION: u32 = 64;

/// Integer base `b ≥ 2`, the reciprocal of the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Base(u64);

impl Base {
    pub fn new(b: u64) -> Result<Self> {
        if b < 2 {
            return Err(Error::BaseTooSmall(b.into()));
        }
        Ok(Base(b))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// `b/(b-1)`, the factor relating `S(1/b)` to `F(1/b)`.
    pub fn ratio(self) -> Rational {
        Rational::new(BigInt::from(self.0), BigInt::from(self.0 - 1))
    }
}

impl TryFrom<i64> for Base {
    type Error = Error;

    fn try_from(b: i64) -> Result<Self> {
        match u64::try_from(b) {
            Ok(b) => Base::new(b),
            Err(_) => Err(Error::BaseTooSmall(b.into())),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn ratio_of(num: BigUint, den: BigUint) -> Rational {
    Rational::new(num.into(), den.into())
}

fn recip(den: BigUint) -> Rational {
    ratio_of(BigUint::one(), den)
}

/// `Σ_{n<terms} 1/(b^{2^n}+1)` with tail `2·b^{-2^terms}`.
pub fn eval_f(b: Base, terms: u32) -> Result<Enclosure> {
    if terms > MAX_F_TERMS {
        return Err(Error::FermatIndexTooLarge {
            index: terms - 1,
            cap: MAX_F_TERMS - 1,
        });
    }
    let mut lo = Rational::zero();
    let mut power = b.big();
    for _ in 0..terms {
        lo += recip(&power + 1u32);
        power = &power * &power;
    }
    let tail = ratio_of(BigUint::from(2u32), power);
    Ok(Enclosure::from_partial_sum(format!("F(1/{b})"), lo, tail))
}

/// Which digit-sum coefficients feed [`eval_s_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DigitSource {
    /// `s₂(n)`.
    Exact,
    /// `s₂(n)` except `s₂(index) + 1` at a single index. A negative control:
    /// anything built on it is no longer a certified enclosure of `S(1/b)`.
    Corrupted { index: u64 },
}

impl DigitSource {
    fn coefficient(self, n: u64) -> u64 {
        match self {
            DigitSource::Exact => s2(&n),
            DigitSource::Corrupted { index } => s2(&n) + u64::from(n == index),
        }
    }
}

/// Certified bound on `Σ_{n>terms} n·b^{-n}`.
pub fn s_tail_bound(b: Base, terms: u64) -> Rational {
    let big_b = b.big();
    let n = BigUint::from(terms);
    let num = (&n + 1u32) * &big_b - &n;
    let bm1 = &big_b - 1u32;
    let den = Pow::pow(&big_b, &n) * &bm1 * &bm1;
    ratio_of(num, den)
}

/// `Σ_{n=0}^{terms} s₂(n)/b^n` with tail `((N+1)b - N)/(b^N (b-1)²)`.
pub fn eval_s(b: Base, terms: u64) -> Result<Enclosure> {
    eval_s_with(b, terms, DigitSource::Exact)
}

pub fn eval_s_with(b: Base, terms: u64, source: DigitSource) -> Result<Enclosure> {
    let big_b = b.big();
    // Horner: Σ c_n b^{terms-n}
    let mut acc = BigUint::zero();
    for n in 0..=terms {
        acc = acc * &big_b + source.coefficient(n);
    }
    let den = Pow::pow(&big_b, &BigUint::from(terms));
    let lo = ratio_of(acc, den);
    let target = match source {
        DigitSource::Exact => format!("S(1/{b})"),
        DigitSource::Corrupted { index } => format!("S(1/{b}) [corrupted at n={index}]"),
    };
    Ok(Enclosure::from_partial_sum(
        target,
        lo,
        s_tail_bound(b, terms),
    ))
}

/// `2^{2^n} + 1`, refusing indices above `cap`.
pub fn fermat_number_capped(n: u32, cap: u32) -> Result<BigUint> {
    if n > cap {
        return Err(Error::FermatIndexTooLarge { index: n, cap });
    }
    Ok((BigUint::one() << (1u64 << n)) + 1u32)
}

pub fn fermat_number(n: u32) -> Result<BigUint> {
    fermat_number_capped(n, DEFAULT_FERMAT_CAP)
}

/// `Σ_{n<terms} 1/F_n` with the tail bound of `eval_f(2, terms)`.
pub fn fermat_reciprocal_sum(terms: u32) -> Result<Enclosure> {
    let mut lo = Rational::zero();
    for n in 0..terms {
        lo += recip(fermat_number(n)?);
    }
    let tail = ratio_of(BigUint::from(2u32), BigUint::one() << (1u64 << terms));
    Ok(Enclosure::from_partial_sum("Σ 1/F_n", lo, tail))
}

/// `Σ_{j=1}^{depth} 10^{-j!}` with tail `2·10^{-(depth+1)!}`, for `depth` in `1..=8`.
pub fn liouville_partial(depth: u32) -> Result<Enclosure> {
    if !(1..=8).contains(&depth) {
        return Err(Error::LiouvilleDepth(depth));
    }
    let factorial = |k: u32| (1..=k as u64).product::<u64>();
    let ten = BigUint::from(10u32);
    let top = factorial(depth);
    let num = (1..=depth).fold(BigUint::zero(), |acc, j| {
        acc + Pow::pow(&ten, top - factorial(j))
    });
    let lo = ratio_of(num, Pow::pow(&ten, top));
    let tail = ratio_of(BigUint::from(2u32), Pow::pow(&ten, factorial(depth + 1)));
    Ok(Enclosure::from_partial_sum("Σ 10^(-j!)", lo, tail))
}

/// Outcome of comparing `S(1/b)` with `b/(b-1)·F(1/b)`.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub base: Base,
    pub precision: u32,
    pub f_terms: u32,
    pub s_terms: u64,
    pub scaled_f: Enclosure,
    pub s: Enclosure,
    pub holds: bool,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub gap: Rational,
}

/// Deepen `F` and `S` until both enclosures (F after scaling by `b/(b-1)`)
/// are narrower than `b^{-precision}`, then report whether they intersect.
pub fn verify_relation(b: Base, precision: u32) -> Result<RelationReport> {
    verify_relation_with(b, precision, DigitSource::Exact)
}

pub fn verify_relation_with(
    b: Base,
    precision: u32,
    source: DigitSource,
) -> Result<RelationReport> {
    let threshold = recip(Pow::pow(&b.big(), precision));
    let ratio = b.ratio();

    let mut f_terms = 0u32;
    let scaled_f = loop {
        let f = eval_f(b, f_terms)?;
        let scaled = f.scaled(&ratio, format!("{b}/{}·F(1/{b})", b.get() - 1))?;
        if scaled.width() < threshold {
            break scaled;
        }
        f_terms += 1;
    };

    let mut s_terms = u64::from(precision.saturating_sub(2));
    while s_tail_bound(b, s_terms) >= threshold {
        s_terms += 1;
    }
    let s = eval_s_with(b, s_terms, source)?;

    Ok(RelationReport {
        base: b,
        precision,
        f_terms,
        s_terms,
        holds: scaled_f.intersects(&s),
        gap: scaled_f.gap(&s),
        scaled_f,
        s,
    })
}

/// Whether the brute-force coefficients of `F(x)` equal those of
/// `(1 - x)·Σ s₂(n) xⁿ` through `x^degree`.
pub fn formal_identity_check(degree: u64) -> bool {
    let oracle = SeriesOracle::expand(degree as usize);
    let digit_series: Vec<i64> = (0..=degree).map(|n| s2(&n) as i64).collect();
    let product = (0..=degree as usize).map(|n| {
        let prev = if n == 0 { 0 } else { digit_series[n - 1] };
        digit_series[n] - prev
    });
    oracle.coefficients().iter().copied().eq(product)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn base(b: u64) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn base_bounds() {
        assert_eq!(Base::new(1), Err(Error::BaseTooSmall(1)));
        assert_eq!(Base::try_from(-3i64), Err(Error::BaseTooSmall(-3)));
        assert_eq!(
            Base::new(0).unwrap_err().to_string(),
            "base must be ≥ 2, got 0"
        );
        assert_eq!(base(4).ratio(), q(4, 3));
    }

    #[test]
    fn f_examples() {
        let e = eval_f(base(2), 0).unwrap();
        assert_eq!((e.lo(), e.hi()), (&q(0, 1), &q(1, 1)));
        let e = eval_f(base(2), 2).unwrap();
        assert_eq!(e.lo(), &q(8, 15));
        assert_eq!(e.hi(), &(q(8, 15) + q(1, 8)));
        let e = eval_f(base(10), 1).unwrap();
        assert_eq!(e.lo(), &q(1, 11));
        assert_eq!(e.hi(), &(q(1, 11) + q(1, 50)));
        assert!(eval_f(base(2), MAX_F_TERMS + 1).is_err());
    }

    #[test]
    fn s_examples() {
        assert_eq!(eval_s(base(2), 0).unwrap().lo(), &q(0, 1));
        assert_eq!(eval_s(base(2), 3).unwrap().lo(), &q(1, 1));
        assert_eq!(eval_s(base(10), 2).unwrap().lo(), &q(11, 100));
    }

    /// Brute-force partial sums of `n·b^{-n}` converge up to the closed form.
    #[test]
    fn s_tail_closed_form_against_partial_sums() {
        for b in [2u64, 3, 7, 10] {
            for terms in [0u64, 1, 5, 12] {
                let bound = s_tail_bound(base(b), terms);
                let mut partial = Rational::zero();
                for n in terms + 1..=terms + 400 {
                    partial +=
                        q(n as i64, 1) / Pow::pow(&Rational::from_integer(b.into()), n as u32);
                    assert!(partial < bound);
                }
                // remaining gap is the tail beyond terms + 400, tiny
                let gap = &bound - &partial;
                assert!(gap < recip(BigUint::from(b).pow(300u32)));
            }
        }
        // Σ_{n≥1} n/2^n = 2
        assert_eq!(s_tail_bound(base(2), 0), q(2, 1));
        assert_eq!(s_tail_bound(base(10), 0), q(10, 81));
    }

    #[test]
    fn fermat_examples() {
        assert_eq!(fermat_number(0).unwrap(), BigUint::from(3u32));
        assert_eq!(fermat_number(1).unwrap(), BigUint::from(5u32));
        assert_eq!(fermat_number(2).unwrap(), BigUint::from(17u32));
        assert_eq!(fermat_number(5).unwrap(), BigUint::from(4_294_967_297u64));
        assert_eq!(
            fermat_number(26),
            Err(Error::FermatIndexTooLarge { index: 26, cap: 25 })
        );
        assert!(fermat_number_capped(4, 3).is_err());
        assert_eq!(fermat_reciprocal_sum(0).unwrap().lo(), &q(0, 1));
        assert_eq!(fermat_reciprocal_sum(2).unwrap().lo(), &q(8, 15));
        assert_eq!(fermat_reciprocal_sum(3).unwrap().lo(), &q(151, 255));
    }

    #[test]
    fn fermat_matches_f_at_two() {
        for n in 0..=10 {
            let a = fermat_reciprocal_sum(n).unwrap();
            let b = eval_f(base(2), n).unwrap();
            assert_eq!(a.lo(), b.lo());
            assert_eq!(a.hi(), b.hi());
        }
    }

    #[test]
    fn liouville_examples() {
        assert_eq!(liouville_partial(1).unwrap().lo(), &q(1, 10));
        assert_eq!(liouville_partial(2).unwrap().lo(), &q(11, 100));
        assert_eq!(liouville_partial(3).unwrap().lo(), &q(110_001, 1_000_000));
        assert_eq!(liouville_partial(1).unwrap().width(), q(2, 100));
        assert_eq!(liouville_partial(0), Err(Error::LiouvilleDepth(0)));
        assert_eq!(liouville_partial(9), Err(Error::LiouvilleDepth(9)));
    }

    #[test]
    fn monotone_refinement() {
        for b in [2u64, 3, 10] {
            for n in 0..6 {
                let wide = eval_f(base(b), n).unwrap();
                let narrow = eval_f(base(b), n + 1).unwrap();
                assert!(wide.contains_enclosure(&narrow), "F b={b} n={n}");
            }
            for n in 0..40 {
                let wide = eval_s(base(b), n).unwrap();
                let narrow = eval_s(base(b), n + 1).unwrap();
                assert!(wide.contains_enclosure(&narrow), "S b={b} n={n}");
            }
        }
        for j in 1..5 {
            let wide = liouville_partial(j).unwrap();
            let narrow = liouville_partial(j + 1).unwrap();
            assert!(wide.contains_enclosure(&narrow), "L j={j}");
        }
    }

    #[test]
    fn f_width_shrinks_doubly_exponentially() {
        for b in [2u64, 3, 10] {
            for n in 0..=6u32 {
                let width = eval_f(base(b), n).unwrap().width();
                let bound = q(2, 1) / Pow::pow(&Rational::from_integer(b.into()), 1u32 << n);
                assert!(width <= bound);
            }
        }
    }

    #[test]
    fn relation_holds_for_small_bases() {
        for b in 2..=6u64 {
            let r = verify_relation(base(b), 32).unwrap();
            assert!(r.holds, "b = {b}");
            assert_eq!(r.gap, Rational::zero());
            let threshold = recip(BigUint::from(b).pow(32u32));
            assert!(r.scaled_f.width() < threshold && r.s.width() < threshold);
        }
    }

    #[test]
    fn relation_detects_corruption() {
        let r = verify_relation_with(base(3), 32, DigitSource::Corrupted { index: 5 }).unwrap();
        assert!(!r.holds);
        assert!(r.gap > Rational::zero());
        // shallow precision cannot see a defect of 3^-5
        let r = verify_relation_with(base(3), 2, DigitSource::Corrupted { index: 5 }).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn formal_identity() {
        assert!(formal_identity_check(1));
        assert!(formal_identity_check(64));
        assert!(formal_identity_check(4096));
    }
}
