//! Exact rationals and certified enclosures.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Text form `numerator/denominator` in base 10. The denominator is always
/// written, including `/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn serialize_rational<S: Serializer>(
    r: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(r))
}

/// Parse `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Decimal expansion of `r` truncated toward zero after `digits` fractional
/// digits. A preview only; the rational is authoritative.
pub fn decimal_preview(r: &Rational, digits: usize) -> String {
    let negative = r.is_negative();
    let abs = r.abs();
    let scale = BigInt::from(10u8).pow(digits as u32);
    let scaled = (abs.numer() * &scale).div_floor(abs.denom());
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let mut out = String::new();
    if negative && scaled.sign() != Sign::NoSign {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!(
            "{:0>width$}",
            frac_part.to_string(),
            width = digits
        ));
    }
    out
}

/// A closed interval `[lo, hi]` of rationals certified to contain a named
/// real constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    target: String,
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(target: impl Into<String>, lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedEnclosure);
        }
        Ok(Enclosure {
            target: target.into(),
            lo,
            hi,
        })
    }

    /// `[lo, lo + tail]` for a one-sided series with non-negative tail.
    pub(crate) fn from_partial_sum(
        target: impl Into<String>,
        lo: Rational,
        tail: Rational,
    ) -> Self {
        debug_assert!(!tail.is_negative());
        let hi = &lo + tail;
        Enclosure {
            target: target.into(),
            lo,
            hi,
        }
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Whether `other` lies inside `self`.
    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Distance between the two intervals; zero when they intersect.
    pub fn gap(&self, other: &Enclosure) -> Rational {
        if other.lo > self.hi {
            &other.lo - &self.hi
        } else if self.lo > other.hi {
            &self.lo - &other.hi
        } else {
            Rational::zero()
        }
    }

    /// Image under multiplication by a positive rational.
    pub fn scaled(&self, factor: &Rational, target: impl Into<String>) -> Result<Enclosure> {
        if !factor.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        Ok(Enclosure {
            target: target.into(),
            lo: &self.lo * factor,
            hi: &self.hi * factor,
        })
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ∈ [{}, {}]",
            self.target,
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Enclosure", 4)?;
        s.serialize_field("target_name", &self.target)?;
        s.serialize_field("lo", &format_rational(&self.lo))?;
        s.serialize_field("hi", &format_rational(&self.hi))?;
        s.serialize_field("width", &format_rational(&self.width()))?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn text_form() {
        assert_eq!(format_rational(&q(8, 15)), "8/15");
        assert_eq!(format_rational(&q(10, 2)), "5/1");
        assert_eq!(format_rational(&q(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(0, 7)), "0/1");
        assert_eq!(parse_rational("16/30").unwrap(), q(8, 15));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn previews() {
        assert_eq!(decimal_preview(&q(1, 3), 5), "0.33333");
        assert_eq!(decimal_preview(&q(8, 15), 4), "0.5333");
        assert_eq!(decimal_preview(&q(-1, 3), 3), "-0.333");
        assert_eq!(decimal_preview(&q(-1, 3000), 2), "0.00");
        assert_eq!(decimal_preview(&q(7, 2), 0), "3");
        assert_eq!(decimal_preview(&q(1, 10), 50).len(), 52);
    }

    #[test]
    fn interval_relations() {
        let a = Enclosure::new("a", q(0, 1), q(1, 2)).unwrap();
        let b = Enclosure::new("b", q(1, 2), q(1, 1)).unwrap();
        let c = Enclosure::new("c", q(3, 4), q(1, 1)).unwrap();
        assert!(a.intersects(&b));
        assert_eq!(a.gap(&b), q(0, 1));
        assert!(!a.intersects(&c));
        assert_eq!(a.gap(&c), q(1, 4));
        assert_eq!(c.gap(&a), q(1, 4));
        assert!(b.contains_enclosure(&c));
        assert!(!c.contains_enclosure(&b));
        assert!(a.contains(&q(1, 3)));
        assert_eq!(
            Enclosure::new("x", q(1, 1), q(0, 1)),
            Err(Error::InvertedEnclosure)
        );
        let s = a.scaled(&q(2, 1), "2a").unwrap();
        assert_eq!((s.lo().clone(), s.hi().clone()), (q(0, 1), q(1, 1)));
        assert_eq!(a.scaled(&q(-1, 1), "neg"), Err(Error::NonPositiveScale));
    }
}
