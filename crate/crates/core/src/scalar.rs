//! Numeric abstraction shared by the exact (rational) and floating evaluation paths.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Field elements the curvature and Einstein formulas are evaluated over.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync {
    fn from_ratio(r: Rational64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(Rational64::from_integer(n))
    }

    fn is_exact() -> bool;
}

impl Scalar for f64 {
    fn from_ratio(r: Rational64) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_ratio(r: Rational64) -> Self {
        BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_exact() -> bool {
        true
    }
}

pub fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Fraction string such as `7/11`, or an integer when the denominator is 1.
pub fn fraction_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ratio_string(q: Rational64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Round to 12 significant digits; the result prints in shortest round-trip form.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x.is_zero() {
        return x;
    }
    format!("{:.11e}", x).parse().unwrap_or(x)
}

/// Parse `"3/5"`, `"2"` or `"-4/6"` as an exact rational.
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}
