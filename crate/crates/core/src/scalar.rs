//! Scalar abstraction shared by the dense linear algebra and the sparse
//! polynomial code.
//!
//! Everything combinatorial in this crate runs over [`Rat`](crate::Rat)
//! (arbitrary precision rationals). The same `Mat` and `SparsePoly`
//! machinery is reused with `f64` by the barrier solver, which only needs
//! approximate answers.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A field element usable as a matrix entry or polynomial coefficient.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact, so `is_zero` is a reliable test.
    const EXACT: bool;

    /// Zero test used for pivoting. Exact types compare with zero; floating
    /// types use a small absolute threshold.
    fn negligible(&self) -> bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits every scalar type")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn negligible(&self) -> bool {
        self.abs() <= 1e-12
    }
}

/// Builds the rational `num / den`.
///
/// # Panics
///
/// Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `v` as a rational.
pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p`. Decimal points and exponents are rejected.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let t = s.trim();
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return None;
    }
    let r: BigRational = t.parse().ok()?;
    Some(r)
}

/// Closest `f64` to a rational.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_reduced() {
        let r = rat(6, -4);
        assert_eq!(fmt_rat(&r), "-3/2");
        assert_eq!(fmt_rat(&rat(0, 5)), "0");
        assert_eq!(fmt_rat(&int(7)), "7");
        assert!(r.denom() > &BigInt::from(0));
    }

    #[test]
    fn parse_accepts_fractions_and_rejects_floats() {
        assert_eq!(parse_rat("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rat(" -4 "), Some(int(-4)));
        assert_eq!(parse_rat("0.5"), None);
        assert_eq!(parse_rat("1e3"), None);
        assert_eq!(parse_rat("1/0"), None);
    }
}
