//! Commutative coefficient rings with exact equality.
//!
//! One series engine serves rational, pi-graded and token-valued
//! coefficients; everything that can sit inside a [`crate::TruncSeries`]
//! implements [`Ring`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rat = BigRational;

/// Commutative ring with exact, decidable equality.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// Rings containing the rationals; needed by exp, log and composition.
pub trait RingWithRationals: Ring {
    fn from_rational(r: &Rat) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rat::from_integer(BigInt::from(n)))
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl RingWithRationals for Rat {
    fn from_rational(r: &Rat) -> Self {
        r.clone()
    }
}

/// `n/d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Unambiguous rational constants (both `Ring` and `num_traits` define
/// `zero`/`one`).
pub fn rzero() -> Rat {
    Rat::from_integer(BigInt::from(0))
}

pub fn rone() -> Rat {
    Rat::from_integer(BigInt::from(1))
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Format a rational as `num/den` (or just `num` when integral).
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational to f64 via long division; exact inputs in our ranges are far
/// below the point where this loses more than one ulp.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    let sign = if num.is_negative() { -1.0 } else { 1.0 };
    let (mut n, d) = (num.abs(), den.clone());
    // scale into f64 range digit by digit
    let mut shift = 0i64;
    while n.bits() > 1000 {
        n >>= 64;
        shift += 64;
    }
    let nf = bigint_to_f64(&n);
    let df = bigint_to_f64(&d);
    sign * nf / df * 2f64.powi(shift as i32)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let mut acc = 0.0f64;
    for d in x.to_u64_digits().1.iter().rev() {
        acc = acc * 1.8446744073709552e19 + *d as f64;
    }
    acc
}
