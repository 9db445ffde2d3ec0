use num_traits::{One, Zero};

use super::{rat_int, rat_pow, Rational, UniPoly};
use crate::error::{invalid, Result};

/// Rational function `N(u) / (1 - u)^d`.
///
/// Canonical: when `d > 0` the numerator does not vanish at `u = 1`, and the
/// zero function always has `d = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFnU {
    numerator: UniPoly,
    pole_order: u32,
}

impl RationalFnU {
    pub fn new(numerator: UniPoly, pole_order: u32) -> Self {
        let mut f = RationalFnU {
            numerator,
            pole_order,
        };
        f.canonicalize();
        f
    }

    /// `1 / (1 - u)`
    pub fn geometric() -> Self {
        Self::new(UniPoly::one(), 1)
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.numerator
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.pole_order = 0;
            return;
        }
        let one = Rational::one();
        while self.pole_order > 0 {
            let (quot, rem) = self.numerator.div_rem_linear(&one);
            if !rem.is_zero() {
                break;
            }
            // N = (u - 1) Q = -(1 - u) Q
            self.numerator = -quot;
            self.pole_order -= 1;
        }
    }

    /// `u * d/du` applied once.
    pub fn mul_u_ddu(&self) -> Self {
        // u (N' (1-u)^-d + d N (1-u)^-(d+1)) = u (N'(1-u) + d N) / (1-u)^(d+1)
        let d = self.pole_order;
        let one_minus_u = UniPoly::from_ints(&[1, -1]);
        let inner = &(&self.numerator.derivative() * &one_minus_u)
            + &self.numerator.scale(&rat_int(d as i64));
        Self::new(inner.shift_up(1), d + 1)
    }

    /// Power-series coefficients of the expansion around `u = 0`, orders `0..=order`.
    pub fn series(&self, order: usize) -> Vec<Rational> {
        // (1-u)^-d = sum_j C(d-1+j, j) u^j
        let d = self.pole_order as usize;
        let mut geo = vec![Rational::zero(); order + 1];
        if d == 0 {
            geo[0] = Rational::one();
        } else {
            let mut binom = Rational::one();
            for (j, slot) in geo.iter_mut().enumerate() {
                *slot = binom.clone();
                binom = binom * rat_int((d + j) as i64) / rat_int((j + 1) as i64);
            }
        }
        (0..=order)
            .map(|k| {
                (0..=k)
                    .map(|i| self.numerator.coeff(i) * &geo[k - i])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Substitutes `u = (q - a)/q`, so that `1 - u = a/q`.
    pub fn substitute_u(&self, a: u64) -> Result<QExpansion> {
        if a == 0 {
            return Err(invalid("substitution parameter a must be positive"));
        }
        let Some(deg) = self.numerator.degree() else {
            return Ok(QExpansion {
                scalar: Rational::one(),
                poly: UniPoly::zero(),
                q_shift: 0,
            });
        };
        let q_minus_a = UniPoly::linear_root(rat_int(a as i64));
        let mut body = UniPoly::zero();
        for (j, coeff) in self.numerator.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let term = q_minus_a.pow(j as u32).shift_up(deg - j).scale(coeff);
            body = &body + &term;
        }
        let scalar = rat_pow(&rat_int(a as i64), -(self.pole_order as i64));
        Ok(QExpansion::new(
            scalar,
            body,
            self.pole_order as i64 - deg as i64,
        ))
    }
}

/// `scalar * q^q_shift * poly`, with the power of `q` folded into `poly`
/// whenever the result is a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub scalar: Rational,
    pub poly: UniPoly,
    pub q_shift: i64,
}

impl QExpansion {
    pub fn new(scalar: Rational, poly: UniPoly, q_shift: i64) -> Self {
        let (poly, q_shift) = if q_shift >= 0 {
            (poly.shift_up(q_shift as usize), 0)
        } else {
            let cancel = (poly.low_order().unwrap_or(0) as i64).min(-q_shift);
            (
                poly.shift_down(cancel as usize).expect("low-order zeros"),
                q_shift + cancel,
            )
        };
        QExpansion {
            scalar,
            poly,
            q_shift,
        }
    }

    /// The expansion as a single polynomial in `q`, if it is one.
    pub fn to_poly(&self) -> Option<UniPoly> {
        (self.q_shift == 0 || self.poly.is_zero()).then(|| self.poly.scale(&self.scalar))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn u_over_1mu_sq() -> RationalFnU {
        RationalFnU::new(UniPoly::from_ints(&[0, 1]), 2)
    }

    #[test]
    fn first_derivative_of_geometric() {
        assert_eq!(RationalFnU::geometric().mul_u_ddu(), u_over_1mu_sq());
    }

    #[test]
    fn second_derivative_of_geometric() {
        let expected = RationalFnU::new(UniPoly::from_ints(&[0, 1, 1]), 3);
        assert_eq!(u_over_1mu_sq().mul_u_ddu(), expected);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let f = RationalFnU::new(UniPoly::one(), 0).mul_u_ddu();
        assert!(f.numerator().is_zero());
        assert_eq!(f.pole_order(), 0);
    }

    #[test]
    fn canonical_form_strips_common_factor() {
        // (1 - u)^2 / (1 - u)^3 = 1 / (1 - u)
        let f = RationalFnU::new(UniPoly::from_ints(&[1, -2, 1]), 3);
        assert_eq!(f, RationalFnU::geometric());
        let g = RationalFnU::new(UniPoly::from_ints(&[1, -1]), 1);
        assert_eq!(g, RationalFnU::new(UniPoly::one(), 0));
    }

    #[test]
    fn substitution_examples() {
        let geo = RationalFnU::geometric().substitute_u(2).unwrap();
        assert_eq!(geo.scalar, rat(1, 2));
        assert_eq!(geo.poly, UniPoly::var());
        assert_eq!(
            geo.to_poly().unwrap(),
            UniPoly::new(vec![rat(0, 1), rat(1, 2)])
        );

        // q (q - 1)
        let first = u_over_1mu_sq().substitute_u(1).unwrap().to_poly().unwrap();
        assert_eq!(first, UniPoly::from_ints(&[0, -1, 1]));

        // q^2 (q - 1) + q (q - 1)^2
        let second = RationalFnU::new(UniPoly::from_ints(&[0, 1, 1]), 3)
            .substitute_u(1)
            .unwrap()
            .to_poly()
            .unwrap();
        let q = UniPoly::var();
        let qm1 = UniPoly::from_ints(&[-1, 1]);
        assert_eq!(second, &(&(&q * &q) * &qm1) + &(&q * &(&qm1 * &qm1)));
    }

    #[test]
    fn substitution_rejects_zero() {
        assert!(RationalFnU::geometric().substitute_u(0).is_err());
    }

    #[test]
    fn non_polynomial_substitution_keeps_negative_power() {
        // u^2 with no pole: ((q - 1)/q)^2
        let e = RationalFnU::new(UniPoly::from_ints(&[0, 0, 1]), 0)
            .substitute_u(1)
            .unwrap();
        assert_eq!(e.q_shift, -2);
        assert!(e.to_poly().is_none());
    }

    #[test]
    fn geometric_substitution_is_q_over_a() {
        for a in 1..=20u64 {
            let p = RationalFnU::geometric()
                .substitute_u(a)
                .unwrap()
                .to_poly()
                .unwrap();
            assert_eq!(p, UniPoly::monomial(rat(1, a as i64), 1));
        }
    }

    fn rfn_strategy() -> impl Strategy<Value = RationalFnU> {
        (prop::collection::vec(-6i64..6, 0..5), 0u32..4)
            .prop_map(|(c, d)| RationalFnU::new(UniPoly::from_ints(&c), d))
    }

    proptest! {
        #[test]
        fn derivative_matches_series(f in rfn_strategy()) {
            const ORDER: usize = 20;
            let before = f.series(ORDER);
            let after = f.mul_u_ddu().series(ORDER);
            for (j, coeff) in before.iter().enumerate() {
                prop_assert_eq!(&after[j], &(coeff * rat_int(j as i64)));
            }
            prop_assert!(f.mul_u_ddu().pole_order() <= f.pole_order() + 1);
        }
    }
}
