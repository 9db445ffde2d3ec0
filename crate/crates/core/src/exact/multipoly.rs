use std::collections::BTreeMap;
use std::fmt;

use super::{Rational, Ring};

/// Sparse polynomial in a fixed number of variables over the ring `R`.
///
/// Terms are keyed by exponent vectors of length `nvars`; zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<R: Ring> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, R>,
}

/// Polynomial in the edge-multiplicity offsets `c_1, ..., c_n`.
pub type MultiPolyC = MultiPoly<Rational>;

impl<R: Ring> MultiPoly<R> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, R::one())
    }

    /// The variable with index `idx`.
    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(
            idx < nvars,
            "variable index {idx} out of range for {nvars} variables"
        );
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, R::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> R {
        self.terms.get(exps).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: R) {
        assert_eq!(exps.len(), self.nvars, "exponent vector has wrong arity");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = existing.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, factor: &R) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(factor));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Evaluates every variable at a rational point, leaving a value in `R`.
    pub fn eval(&self, point: &[Rational]) -> R {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut mono = Rational::from_integer(1.into());
            for (x, &k) in point.iter().zip(e) {
                mono *= num_traits::pow(x.clone(), k as usize);
            }
            acc = acc.add(&c.mul(&R::from_rational(mono)));
        }
        acc
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = vec![0; self.nvars];
            for (i, &k) in e.iter().enumerate() {
                exps[perm[i]] = k;
            }
            out.add_term(exps, c.clone());
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> MultiPoly<S> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

impl MultiPoly<Rational> {
    /// Adds trailing variables that do not appear in any term.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps.resize(nvars, 0);
            out.add_term(exps, c.clone());
        }
        out
    }

    /// Substitutes a polynomial for every variable.
    pub fn substitute(&self, images: &[MultiPoly<Rational>]) -> MultiPoly<Rational> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut mono = Self::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    mono = mono.mul(&img.pow(k));
                }
            }
            out = out.add(&mono);
        }
        out
    }
}

impl<R: Ring + fmt::Display> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*c{}", v + 1)?,
                    _ => write!(f, "*c{}^{}", v + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
