//! Gamma and Delta polynomials in `q`, each with two independent
//! constructions.

use serde::{Deserialize, Serialize};

use crate::combinat::subsets;
use crate::error::{invalid, Error, Result};
use crate::exact::{factorial, rat_int, Integer, UniPoly};
use crate::special::{binomial, eulerian, stirling1, stirling2};

/// `Gamma_k(q, n) = sum_i (-1)^(k-i) s2(k, i) i! q^(i-1) n^(k-i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPoly {
    pub k: u32,
    pub n: u32,
    pub poly: UniPoly,
}

/// `Delta_{n,k}(q)`: sum over `(n-k)`-subsets of `{1..n-1}` of `prod (q - i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaPoly {
    pub n: u32,
    pub k: u32,
    pub poly: UniPoly,
}

fn check_gamma_args(k: u32, n: u32) -> Result<()> {
    if k == 0 {
        return Err(invalid("Gamma_k needs k >= 1"));
    }
    if n == 0 {
        return Err(invalid("Gamma_k(q, n) needs n >= 1"));
    }
    Ok(())
}

fn check_delta_args(n: u32, k: u32) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!(
            "Delta_(n,k) needs 1 <= k <= n, got n={n} k={k}"
        )));
    }
    Ok(())
}

pub fn gamma_poly(k: u32, n: u32) -> Result<GammaPoly> {
    check_gamma_args(k, n)?;
    let (k_, n_) = (k as i64, Integer::from(n));
    let coeffs = (1..=k_)
        .map(|i| {
            let sign = if (k_ - i) % 2 == 0 { 1 } else { -1 };
            let v = stirling2(k_, i)
                * factorial(i as u64)
                * num_traits::pow(n_.clone(), (k_ - i) as usize);
            rat_int(v * sign)
        })
        .collect();
    Ok(GammaPoly {
        k,
        n,
        poly: UniPoly::new(coeffs),
    })
}

/// Gamma through the Eulerian triangle: `sum_{i+j=k-1} A(i,j) q^i (q-n)^j`.
pub fn gamma_via_frobenius(k: u32, n: u32) -> Result<UniPoly> {
    check_gamma_args(k, n)?;
    let q_minus_n = UniPoly::linear_root(rat_int(n as i64));
    let top = k as i64 - 1;
    Ok((0..=top).fold(UniPoly::zero(), |acc, i| {
        let term = q_minus_n
            .pow((top - i) as u32)
            .shift_up(i as usize)
            .scale(&rat_int(eulerian(i, top - i)));
        &acc + &term
    }))
}

/// Delta from the signed Stirling numbers of the first kind:
/// `sum_m C(k-1+m, m) s1(n, k+m) q^m`.
pub fn delta_poly(n: u32, k: u32) -> Result<DeltaPoly> {
    check_delta_args(n, k)?;
    let (n_, k_) = (n as i64, k as i64);
    let coeffs = (0..=n_ - k_)
        .map(|m| rat_int(binomial(k_ - 1 + m, m) * stirling1(n_, k_ + m)))
        .collect();
    Ok(DeltaPoly {
        n,
        k,
        poly: UniPoly::new(coeffs),
    })
}

/// Largest `n` accepted by [`delta_poly_bruteforce`] by default.
pub const DEFAULT_SUBSET_BUDGET: u32 = 16;

/// Delta as the literal subset sum.
pub fn delta_poly_bruteforce(n: u32, k: u32, max_n: u32) -> Result<UniPoly> {
    check_delta_args(n, k)?;
    if n > max_n {
        return Err(Error::BudgetExceeded {
            what: "n for subset enumeration",
            limit: max_n as u64,
            requested: n as u64,
        });
    }
    let factors: Vec<UniPoly> = (1..n as i64)
        .map(|i| UniPoly::linear_root(rat_int(i)))
        .collect();
    Ok(subsets(factors.len(), (n - k) as usize)
        .into_iter()
        .fold(UniPoly::zero(), |acc, picks| {
            let prod = picks.iter().fold(UniPoly::one(), |p, &i| &p * &factors[i]);
            &acc + &prod
        }))
}

/// Where the identity checks get their Gamma and Delta polynomials from.
///
/// The canonical source builds them from the formulas above; tests swap in
/// perturbed sources to confirm the checks notice.
pub trait PolySource: Sync {
    fn gamma(&self, k: u32, n: u32) -> UniPoly;
    fn delta(&self, n: u32, k: u32) -> UniPoly;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Canonical;

impl PolySource for Canonical {
    fn gamma(&self, k: u32, n: u32) -> UniPoly {
        gamma_poly(k, n)
            .map(|g| g.poly)
            .unwrap_or_else(|_| UniPoly::zero())
    }

    fn delta(&self, n: u32, k: u32) -> UniPoly {
        delta_poly(n, k)
            .map(|d| d.poly)
            .unwrap_or_else(|_| UniPoly::zero())
    }
}

/// Which single polynomial a [`Perturbed`] source alters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyTarget {
    Gamma { k: u32, n: u32 },
    Delta { n: u32, k: u32 },
}

/// The canonical source with one coefficient of one polynomial bumped by +1.
#[derive(Clone, Copy, Debug)]
pub struct Perturbed {
    pub target: PolyTarget,
    pub power: usize,
}

impl PolySource for Perturbed {
    fn gamma(&self, k: u32, n: u32) -> UniPoly {
        let p = Canonical.gamma(k, n);
        if self.target == (PolyTarget::Gamma { k, n }) {
            p.perturb(self.power, &rat_int(1))
        } else {
            p
        }
    }

    fn delta(&self, n: u32, k: u32) -> UniPoly {
        let p = Canonical.delta(n, k);
        if self.target == (PolyTarget::Delta { n, k }) {
            p.perturb(self.power, &rat_int(1))
        } else {
            p
        }
    }
}
