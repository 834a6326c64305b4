//! Gaussian rationals: exact complex scalars a + b i.

use crate::ring::{format_rat, rat, Rat, Ring, RingWithRationals};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(rat(n, 1), rat(0, 1))
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussRat::new(r, rat(0, 1))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat::new(rat(0, 1), rat(1, 1))
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }

    pub fn inv(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        assert!(!Zero::is_zero(&n), "division by zero GaussRat");
        GaussRat::new(&self.re / &n, -&self.im / &n)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(
            crate::ring::rat_to_f64(&self.re),
            crate::ring::rat_to_f64(&self.im),
        )
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        GaussRat::from_int(0)
    }
    fn one() -> Self {
        GaussRat::from_int(1)
    }
    fn add(&self, other: &Self) -> Self {
        GaussRat::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn neg(&self) -> Self {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        GaussRat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
}

impl RingWithRationals for GaussRat {
    fn from_rational(r: &Rat) -> Self {
        GaussRat::from_rat(r.clone())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", format_rat(&self.re))
        } else if Zero::is_zero(&self.re) {
            write!(f, "{}*i", format_rat(&self.im))
        } else {
            write!(f, "{}+{}*i", format_rat(&self.re), format_rat(&self.im))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_arithmetic() {
        let i = GaussRat::i();
        assert_eq!(i.mul(&i), GaussRat::from_int(-1));
        let z = GaussRat::new(rat(1, 2), rat(-3, 1));
        assert_eq!(z.mul(&z.inv()), GaussRat::from_int(1));
        assert_eq!(z.conj().conj(), z);
    }
}
