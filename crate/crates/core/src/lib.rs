//! Exact arithmetic around the binary digit-sum series `S(1/b) = Σ s₂(n)/bⁿ`
//! and its companion `F(1/b) = Σ 1/(b^{2^n}+1)`.
//!
//! * [`sequences`]: `s₂`, `v₂` and the coefficients `f(n)` by three routes.
//! * [`series`]: certified rational enclosures of `F(1/b)`, `S(1/b)`, the
//!   Fermat reciprocal sum and the Liouville constant, and the relation
//!   `S(1/b) = b/(b-1)·F(1/b)`.
//! * [`diophantine`]: continued fractions, certified prefixes and the
//!   convergent-growth estimate of the irrationality exponent.

pub mod diophantine;
pub mod error;
pub mod rational;
pub mod sequences;
pub mod series;

pub use diophantine::{
    certified_cf_prefix, cf_of_rational, convergents, estimate_mu, estimate_mu_for_constant,
    Constant, ConstantEstimate, ContinuedFraction, ConvergentTable, DepthPolicy, GrowthRatio,
    MuEstimate,
};
pub use error::{Error, Result};
pub use rational::{decimal_preview, format_rational, parse_rational, Enclosure, Rational};
pub use sequences::{
    f_difference, f_multiplicative, f_series_oracle, s2, v2, Coefficient, Natural, SeriesOracle,
};
pub use series::{
    eval_f, eval_s, eval_s_with, fermat_number, fermat_reciprocal_sum, formal_identity_check,
    liouville_partial, verify_relation, verify_relation_with, Base, DigitSource, RelationReport,
};

pub use num_bigint::{BigInt, BigUint};
