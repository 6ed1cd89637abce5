//! Exact rational arithmetic.
//!
//! Every score, debt, credit and buying time is a [`Rational`]. The type is
//! `num_rational::BigRational`; this module only adds the handful of helpers
//! the rules and checkers need.

use alloc::string::String;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Smallest integer `>= q`, saturating at `u64::MAX`; negative values map to 0.
pub fn ceil_u64(q: &Rational) -> u64 {
    if q.is_negative() {
        return 0;
    }
    let c = q.numer().div_ceil(q.denom());
    c.to_u64().unwrap_or(u64::MAX)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `num/den` rendering used by the CLI and file formats.
pub fn fraction(q: &Rational) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}/{}", q.numer(), q.denom());
    s
}

/// `n`-th harmonic number `1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> Rational {
    let mut sum = Rational::zero();
    for j in 1..=n {
        sum += ratio(1, j as i64);
    }
    sum
}
