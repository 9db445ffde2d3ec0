//! Exact arithmetic: big integers, reduced fractions, and the polynomial
//! shapes used by the rest of the crate.

mod multipoly;
mod rfn;
mod unipoly;

pub use multipoly::{MultiPoly, MultiPolyC};
pub use rfn::{QExpansion, RationalFnU};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Exact fraction, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn rat_int(v: impl Into<Integer>) -> Rational {
    Rational::from_integer(v.into())
}

/// Coefficient ring for [`MultiPoly`].
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
}

impl Ring for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        UniPoly::constant(r)
    }
}

/// Integer power of a rational; negative exponents invert.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(Integer::one(), |acc, k| acc * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &int(-3));
        assert_eq!(r.denom(), &int(2));
        assert!(Zero::is_zero(&rat(0, 7)));
        assert_eq!(rat(0, 7).denom(), &int(1));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(rat_pow(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(rat_pow(&rat(0, 1), 0), rat(1, 1));
    }

    proptest! {
        #[test]
        fn cross_multiplication(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let sum = rat(a, b) + rat(c, d);
            prop_assert_eq!(sum * rat_int(d) * rat_int(b), rat_int(a * d + c * b));
        }
    }
}
