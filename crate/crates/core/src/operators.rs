//! Commuting operators `D_a = u_a d/du_a`, with `u_a = (q - a)/q`, acting on
//! `pi_n = prod_b 1/(1 - u_b)`.
//!
//! Everything here is a polynomial in the symbol `q`. The bridge to the
//! growth constants substitutes `q = c_{n+1} + n`; under it the geometric
//! ratio `(c_{n+1} + k - 1)/(c_{n+1} + n)` of series index `k` equals `u_a`
//! with `a = n - k + 1`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::combinat::{permutations, subsets};
use crate::error::{invalid, Result};
use crate::exact::{
    factorial, rat_int, rat_pow, MultiPoly, MultiPolyC, Rational, RationalFnU, UniPoly,
};
use crate::special::eulerian;

/// Exponents `(m_1, ..., m_n)` of `D_1^m_1 ... D_n^m_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DMonomial(pub Vec<u32>);

impl DMonomial {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

/// Polynomial in `D_1..D_n` whose coefficients are polynomials in `c_1..c_n`.
///
/// Stored as one polynomial over `2n` variables, `c` first and `D` second.
#[derive(Clone, Debug, PartialEq)]
pub struct DOperatorPoly {
    arity: usize,
    poly: MultiPolyC,
}

impl DOperatorPoly {
    pub fn zero(arity: usize) -> Self {
        DOperatorPoly {
            arity,
            poly: MultiPolyC::zero(2 * arity),
        }
    }

    pub fn one(arity: usize) -> Self {
        DOperatorPoly {
            arity,
            poly: MultiPolyC::one(2 * arity),
        }
    }

    /// `c_a` (1-based).
    pub fn c(arity: usize, a: usize) -> Self {
        DOperatorPoly {
            arity,
            poly: MultiPolyC::var(2 * arity, a - 1),
        }
    }

    /// `D_a` (1-based).
    pub fn d(arity: usize, a: usize) -> Self {
        DOperatorPoly {
            arity,
            poly: MultiPolyC::var(2 * arity, arity + a - 1),
        }
    }

    /// `D_a + D_{a+1} + ... + D_n`
    pub fn tail_sum(arity: usize, a: usize) -> Self {
        (a..=arity).fold(Self::zero(arity), |acc, b| acc.add(&Self::d(arity, b)))
    }

    pub fn add(&self, other: &Self) -> Self {
        DOperatorPoly {
            arity: self.arity,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        DOperatorPoly {
            arity: self.arity,
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Groups terms by D-monomial.
    pub fn terms(&self) -> BTreeMap<DMonomial, MultiPolyC> {
        let n = self.arity;
        let mut out: BTreeMap<DMonomial, MultiPolyC> = BTreeMap::new();
        for (exps, coeff) in self.poly.terms() {
            let mono = DMonomial(exps[n..].to_vec());
            out.entry(mono)
                .or_insert_with(|| MultiPolyC::zero(n))
                .add_term(exps[..n].to_vec(), coeff.clone());
        }
        out
    }

    /// Applies the operator to `pi_n`, giving a polynomial in `c` with
    /// coefficients in `q`.
    pub fn apply_to_pi(&self) -> MultiPoly<UniPoly> {
        let n = self.arity;
        let mut cache: HashMap<Vec<u32>, UniPoly> = HashMap::new();
        let mut out = MultiPoly::zero(n);
        for (exps, coeff) in self.poly.terms() {
            let d_part = exps[n..].to_vec();
            let value = cache
                .entry(d_part.clone())
                .or_insert_with(|| apply_dmonomial_to_pi(&DMonomial(d_part)));
            out.add_term(exps[..n].to_vec(), value.scale(coeff));
        }
        out
    }
}

/// `(u d/du)^k (1-u)^{-1}` after `u = (q-a)/q`, via the Eulerian closed form
/// `a^{-k-1} sum_{i+j=k-1} A(i,j) q^{i+1} (q-a)^{j+1}`; `k = 0` gives `q/a`.
pub fn derivative_closed_form(k: u32, a: u64) -> Result<UniPoly> {
    if a == 0 {
        return Err(invalid("substitution parameter a must be positive"));
    }
    let a_rat = rat_int(a as i64);
    if k == 0 {
        return Ok(UniPoly::monomial(a_rat.recip(), 1));
    }
    let q_minus_a = UniPoly::linear_root(a_rat.clone());
    let top = k as i64 - 1;
    let sum = (0..=top).fold(UniPoly::zero(), |acc, i| {
        let term = q_minus_a
            .pow((top - i + 1) as u32)
            .shift_up(i as usize + 1)
            .scale(&rat_int(eulerian(i, top - i)));
        &acc + &term
    });
    Ok(sum.scale(&rat_pow(&a_rat, -(k as i64) - 1)))
}

/// The same quantity by differentiating `1/(1-u)` symbolically `k` times and
/// substituting afterwards.
pub fn derivative_via_chain(k: u32, a: u64) -> Result<UniPoly> {
    let f = (0..k).fold(RationalFnU::geometric(), |f, _| f.mul_u_ddu());
    let e = f.substitute_u(a)?;
    e.to_poly()
        .ok_or_else(|| invalid("substituted expression is not a polynomial in q"))
}

/// `prod_b D_b^{m_b} (1 - u_b)^{-1}`, one factor per variable.
pub fn apply_dmonomial_to_pi(mono: &DMonomial) -> UniPoly {
    mono.0
        .iter()
        .enumerate()
        .fold(UniPoly::one(), |acc, (b, &m)| {
            let factor = derivative_closed_form(m, b as u64 + 1).expect("b >= 1");
            &acc * &factor
        })
}

/// The operator `sum_{sigma in S_n} prod_a (c_{sigma(a)} + D_a + ... + D_n)`.
pub fn eq_new_n_operator(n: usize) -> DOperatorPoly {
    let tails: Vec<DOperatorPoly> = (1..=n).map(|a| DOperatorPoly::tail_sum(n, a)).collect();
    permutations(n).fold(DOperatorPoly::zero(n), |acc, sigma| {
        let prod = (0..n).fold(DOperatorPoly::one(n), |p, a| {
            p.mul(&DOperatorPoly::c(n, sigma[a] + 1).add(&tails[a]))
        });
        acc.add(&prod)
    })
}

/// Left side: the permutation-summed operator applied to `pi_n`.
pub fn eq_new_n_lhs(n: usize) -> MultiPoly<UniPoly> {
    eq_new_n_operator(n).apply_to_pi()
}

/// Right side: `(q^n / n!) sum_sigma prod_a (c_{sigma(a)} + q - a)`.
pub fn eq_new_n_rhs(n: usize) -> MultiPoly<UniPoly> {
    let lin: Vec<MultiPoly<UniPoly>> = (1..=n)
        .map(|a| MultiPoly::constant(n, UniPoly::linear_root(rat_int(a as i64))))
        .collect();
    let sum = permutations(n).fold(MultiPoly::zero(n), |acc, sigma| {
        let prod = (0..n).fold(MultiPoly::one(n), |p: MultiPoly<UniPoly>, a| {
            p.mul(&MultiPoly::var(n, sigma[a]).add(&lin[a]))
        });
        acc.add(&prod)
    });
    let prefactor = UniPoly::monomial(Rational::new(One::one(), factorial(n as u64)), n);
    sum.scale(&prefactor)
}

/// `I_n^k(q) = sum_{i_1 < ... < i_k} prod_j (D_{i_j} + ... + D_n) pi_n`.
pub fn i_nk(n: usize, k: usize) -> Result<UniPoly> {
    if k > n {
        return Err(invalid(format!("I_n^k needs 0 <= k <= n, got n={n} k={k}")));
    }
    let tails: Vec<DOperatorPoly> = (1..=n).map(|a| DOperatorPoly::tail_sum(n, a)).collect();
    let op = subsets(n, k)
        .into_iter()
        .fold(DOperatorPoly::zero(n), |acc, picks| {
            let prod = picks
                .iter()
                .fold(DOperatorPoly::one(n), |p, &i| p.mul(&tails[i]));
            acc.add(&prod)
        });
    let applied = op.apply_to_pi();
    Ok(applied.coeff(&vec![0; n]))
}

/// True when `p` is unchanged by every permutation of its variables.
pub fn is_symmetric<R: crate::exact::Ring>(p: &MultiPoly<R>) -> bool {
    let n = p.nvars();
    (0..n.saturating_sub(1)).all(|i| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        p.permute_vars(&perm) == *p
    })
}

/// The substituted right-hand value `(q^n/n!) sum_sigma prod_a (c_sigma(a) + q - a)`
/// at concrete `c` and `q`.
pub fn eq_new_n_rhs_value(c: &[Rational], q: &Rational) -> Rational {
    let n = c.len();
    let total = permutations(n).fold(Rational::zero(), |acc, sigma| {
        let prod = (0..n).fold(Rational::one(), |p, a| {
            p * (&c[sigma[a]] + q - rat_int(a as i64 + 1))
        });
        acc + prod
    });
    total * rat_pow(q, n as i64) / Rational::from_integer(factorial(n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q() -> UniPoly {
        UniPoly::var()
    }

    fn lin(a: i64) -> UniPoly {
        UniPoly::linear_root(rat_int(a))
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative_closed_form(1, 1).unwrap(), &q() * &lin(1));
        let three = &(&(&q().pow(3) * &lin(1)) + &(&q().pow(2) * &lin(1).pow(2)).scale(&rat(4, 1)))
            + &(&q() * &lin(1).pow(3));
        assert_eq!(derivative_closed_form(3, 1).unwrap(), three);
        let two = (&(&q().pow(2) * &lin(2)) + &(&q() * &lin(2).pow(2))).scale(&rat(1, 8));
        assert_eq!(derivative_closed_form(2, 2).unwrap(), two);
        assert_eq!(derivative_via_chain(2, 2).unwrap(), two);
        assert_eq!(
            derivative_closed_form(0, 3).unwrap(),
            UniPoly::monomial(rat(1, 3), 1)
        );
        assert!(derivative_closed_form(2, 0).is_err());
    }

    #[test]
    fn derivative_matches_chain() {
        for k in 0..=10 {
            for a in 1..=6 {
                assert_eq!(
                    derivative_closed_form(k, a).unwrap(),
                    derivative_via_chain(k, a).unwrap()
                );
            }
        }
    }

    /// Truncated double geometric sum `sum_{j1,j2 <= N} j1^m1 j2^m2 u1^j1 u2^j2`
    /// at a concrete `q`.
    fn truncated_pi(m: &[u32], q: i64, terms: usize) -> Rational {
        let qr = rat_int(q);
        m.iter()
            .enumerate()
            .map(|(b, &mb)| {
                let u = (&qr - rat_int(b as i64 + 1)) / &qr;
                let mut s = Rational::zero();
                let mut up = Rational::one();
                for j in 0..terms {
                    s += num_traits::pow(rat_int(j as i64), mb as usize) * &up;
                    up *= &u;
                }
                s
            })
            .fold(Rational::one(), |a, b| a * b)
    }

    #[test]
    fn dmonomial_examples() {
        let pi = apply_dmonomial_to_pi(&DMonomial(vec![0, 0]));
        assert_eq!(pi, UniPoly::monomial(rat(1, 2), 2));
        let d1 = apply_dmonomial_to_pi(&DMonomial(vec![1, 0]));
        assert_eq!(d1, &UniPoly::monomial(rat(1, 2), 2) * &lin(1));
        let d1d2 = apply_dmonomial_to_pi(&DMonomial(vec![1, 1]));
        assert_eq!(
            d1d2,
            (&(&q() * &lin(1)) * &(&q() * &lin(2))).scale(&rat(1, 4))
        );
    }

    #[test]
    fn dmonomials_approach_truncated_series() {
        // q = 9: ratios 8/9 and 7/9; 600 terms leave a tail below 1e-25.
        for m in [[0u32, 0], [1, 0], [1, 1], [2, 1]] {
            let exact = apply_dmonomial_to_pi(&DMonomial(m.to_vec())).eval(&rat(9, 1));
            let approx = truncated_pi(&m, 9, 600);
            assert!(approx < exact);
            assert!((&exact - &approx) < rat(1, 1_000_000_000_000_000));
        }
    }

    #[test]
    fn new_n_single_variable() {
        // c_1 q + q (q - 1)
        let lhs = eq_new_n_lhs(1);
        assert_eq!(lhs.coeff(&[1]), q());
        assert_eq!(lhs.coeff(&[0]), &q() * &lin(1));
        let rhs = eq_new_n_rhs(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn new_n_two_variables() {
        let half_q2 = UniPoly::monomial(rat(1, 2), 2);
        let op = eq_new_n_operator(2);
        let terms = op.terms();
        // D-free part is 2 c1 c2
        assert_eq!(terms[&DMonomial(vec![0, 0])].coeff(&[1, 1]), rat(2, 1));
        // D_2 (D_2 + D_1) pi_2 = (q^2/2)(q-1)(q-2)
        let d_part = DOperatorPoly::d(2, 2)
            .mul(&DOperatorPoly::tail_sum(2, 1))
            .apply_to_pi();
        assert_eq!(d_part.coeff(&[0, 0]), &(&half_q2 * &lin(1)) * &lin(2));
        // (2 D_2 + D_1) pi_2 = (q^2/2)(2q - 3)
        let lin_part = DOperatorPoly::d(2, 2)
            .add(&DOperatorPoly::d(2, 2))
            .add(&DOperatorPoly::d(2, 1))
            .apply_to_pi();
        assert_eq!(
            lin_part.coeff(&[0, 0]),
            &half_q2 * &UniPoly::from_ints(&[-3, 2])
        );

        let lhs = eq_new_n_lhs(2);
        let rhs = eq_new_n_rhs(2);
        assert_eq!(lhs, rhs);
        // c1 c2 coefficient is 2 * (q^2 / 2)
        assert_eq!(lhs.coeff(&[1, 1]), half_q2.scale(&rat(2, 1)));
        // c = (0, 0) leaves q^2 (q-1)(q-2)
        let at_zero = rhs.eval(&[rat(0, 1), rat(0, 1)]);
        assert_eq!(at_zero, &(&q().pow(2) * &lin(1)) * &lin(2));
    }

    #[test]
    fn new_n_identity_up_to_four() {
        for n in 1..=4 {
            let lhs = eq_new_n_lhs(n);
            assert_eq!(lhs, eq_new_n_rhs(n), "n={n}");
            assert!(is_symmetric(&lhs));
        }
    }

    #[test]
    fn i_nk_examples() {
        let half_q2 = UniPoly::monomial(rat(1, 2), 2);
        assert_eq!(i_nk(2, 0).unwrap(), half_q2);
        assert_eq!(
            i_nk(2, 1).unwrap(),
            &half_q2 * &UniPoly::from_ints(&[-3, 2])
        );
        assert_eq!(i_nk(2, 2).unwrap(), &(&half_q2 * &lin(1)) * &lin(2));
        assert!(i_nk(2, 3).is_err());
    }

    #[test]
    fn rhs_value_matches_symbolic() {
        let c = [rat(1, 1), rat(3, 1), rat(2, 1)];
        let qv = rat(7, 1);
        let sym = eq_new_n_rhs(3).eval(&c).eval(&qv);
        assert_eq!(eq_new_n_rhs_value(&c, &qv), sym);
    }
}
