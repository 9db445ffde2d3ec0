use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{rat_int, Integer, Rational};

/// Dense univariate polynomial with rational coefficients, constant term first.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and `degree() == None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(coeff: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = coeff;
        Self::new(coeffs)
    }

    /// `x - root`
    pub fn linear_root(root: Rational) -> Self {
        Self::new(vec![-root, Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of leading zero coefficients (the power of `x` dividing `self`).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    /// Divide by `x^k`; the low `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(x))`
    pub fn compose(&self, inner: &UniPoly) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }

    /// Synthetic division by `x - root`, returning quotient and remainder.
    pub fn div_rem_linear(&self, root: &Rational) -> (Self, Rational) {
        if self.is_zero() {
            return (Self::zero(), Rational::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * root;
            if i == 0 {
                return (Self::new(quot), v);
            }
            quot[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Adds `delta` to the coefficient of `x^power`.
    pub fn perturb(&self, power: usize, delta: &Rational) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::zero());
        }
        coeffs[power] += delta;
        Self::new(coeffs)
    }

    /// Coefficients as decimal strings (`"p"` or `"p/q"`), constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        DisplayPoly { poly: self, var }
    }
}

struct DisplayPoly<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("q"))
    }
}

impl From<Integer> for UniPoly {
    fn from(v: Integer) -> Self {
        Self::constant(rat_int(v))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $method(self, rhs: UniPoly) -> UniPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $method(self, rhs: &UniPoly) -> UniPoly {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}
