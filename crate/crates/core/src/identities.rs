//! Range verification of the Gamma/Delta/Stirling identities and the
//! operator identities, producing serializable pass/fail reports.
//!
//! Every polynomial identity is compared coefficient-wise. Verifiers that
//! consume Gamma or Delta polynomials take them from a [`PolySource`], so a
//! perturbed source can be swapped in to confirm the checks have teeth.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{factorial, rat_int, rat_pow, Rational, UniPoly};
use crate::gamma_delta::{delta_poly_bruteforce, gamma_via_frobenius, PolySource};
use crate::operators::{
    derivative_closed_form, derivative_via_chain, eq_new_n_lhs, eq_new_n_rhs, i_nk,
};
use crate::special::{binomial, stirling1, stirling2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `Delta_{n,k} = sum_{m=0}^{n-k} C(k+m,1+m) Gamma_{1+m}(q,n) Delta_{n,k+m} / n^{1+m}`
    Colyrel,
    /// `Delta_{n,k} = (1/(n-k)) sum_{m=1}^{n-k} C(m+k,m+1) n^{-m} Gamma_{m+1} Delta_{n,k+m}`
    StirlingForm,
    /// Coefficient of `q^r` in the previous identity, in Stirling numbers.
    Coefs,
    /// `s1(n,n-k) = (1/k) sum_{m=1}^k C(m+n-k,m+1) (-1)^m s1(n,n-k+m)`
    Star,
    /// `s1(n,n-1) = -C(n,2)` and `s1(n,n-2) = n(n-1)(n-2)(3n-1)/24`
    KnownS1,
    /// `Gamma_k(q,n) = sum_{i+j=k-1} A(i,j) q^i (q-n)^j`
    Frobenius,
    /// Delta from Stirling numbers equals the literal subset sum.
    DeltaDual,
    /// `(u d/du)^k (1-u)^{-1}` closed form versus the symbolic derivative chain.
    Thm1,
    /// Both sides of the permutation-summed operator identity.
    NewN,
    /// `n! I_n^k(q) / q^n = Delta_{n+1,n-k+1}(q)`
    INk,
}

impl Identity {
    pub const ALL: [Identity; 10] = [
        Identity::Colyrel,
        Identity::StirlingForm,
        Identity::Coefs,
        Identity::Star,
        Identity::KnownS1,
        Identity::Frobenius,
        Identity::DeltaDual,
        Identity::Thm1,
        Identity::NewN,
        Identity::INk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Colyrel => "colyrel",
            Identity::StirlingForm => "stirling_form",
            Identity::Coefs => "coefs",
            Identity::Star => "star",
            Identity::KnownS1 => "known_s1",
            Identity::Frobenius => "frobenius",
            Identity::DeltaDual => "delta_dual",
            Identity::Thm1 => "thm1",
            Identity::NewN => "new_n",
            Identity::INk => "i_nk",
        }
    }

    /// Ceiling used when none is requested.
    pub fn default_ceiling(self) -> u32 {
        match self {
            Identity::Colyrel | Identity::StirlingForm | Identity::Coefs => 10,
            Identity::Star | Identity::KnownS1 => 30,
            Identity::Frobenius | Identity::DeltaDual => 12,
            Identity::Thm1 => 10,
            Identity::NewN => 5,
            Identity::INk => 6,
        }
    }

    /// Largest ceiling accepted; beyond it the work grows too fast to be useful.
    pub fn hard_limit(self) -> u32 {
        match self {
            Identity::Colyrel | Identity::StirlingForm | Identity::Coefs => 40,
            Identity::Star | Identity::KnownS1 => 200,
            Identity::Frobenius => 40,
            Identity::DeltaDual => crate::gamma_delta::DEFAULT_SUBSET_BUDGET,
            Identity::Thm1 => 24,
            Identity::NewN => 6,
            Identity::INk => 8,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| invalid(format!("unknown identity '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRange {
    pub min: u32,
    pub max: u32,
}

/// The first failing case: its parameters and both sides, exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub params: BTreeMap<String, i64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub range: BTreeMap<String, ParamRange>,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
    pub cases: u64,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Accumulates cases and stops at the first counterexample.
struct Run {
    identity: Identity,
    range: BTreeMap<String, ParamRange>,
    cases: u64,
    counterexample: Option<Counterexample>,
    notes: Vec<String>,
    start: Instant,
}

impl Run {
    fn new(identity: Identity, ranges: &[(&str, u32, u32)]) -> Self {
        Run {
            identity,
            range: ranges
                .iter()
                .map(|&(name, min, max)| (name.to_string(), ParamRange { min, max }))
                .collect(),
            cases: 0,
            counterexample: None,
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    /// Records one comparison; returns false once a counterexample exists.
    fn check<T: PartialEq + fmt::Display>(
        &mut self,
        params: &[(&str, i64)],
        lhs: &T,
        rhs: &T,
    ) -> bool {
        self.cases += 1;
        if lhs != rhs {
            self.counterexample = Some(Counterexample {
                params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        !self.failed()
    }

    fn finish(self) -> IdentityReport {
        IdentityReport {
            identity: self.identity,
            range: self.range,
            status: if self.counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            counterexample: self.counterexample,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
            cases: self.cases,
            notes: self.notes,
        }
    }
}

fn check_ceiling(identity: Identity, max_n: u32) -> Result<()> {
    if max_n > identity.hard_limit() {
        return Err(Error::BudgetExceeded {
            what: "verification ceiling",
            limit: identity.hard_limit() as u64,
            requested: max_n as u64,
        });
    }
    Ok(())
}

fn n_pow(n: u32, e: u32) -> Rational {
    rat_pow(&rat_int(n), e as i64)
}

pub fn verify_colyrel(src: &dyn PolySource, max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::Colyrel, max_n)?;
    let mut run = Run::new(Identity::Colyrel, &[("n", 1, max_n), ("k", 1, max_n)]);
    'outer: for n in 1..=max_n {
        for k in 1..=n {
            let rhs = (0..=n - k).fold(UniPoly::zero(), |acc, m| {
                let weight = rat_int(binomial((k + m) as i64, (1 + m) as i64)) / n_pow(n, 1 + m);
                let term = &src.gamma(1 + m, n) * &src.delta(n, k + m);
                &acc + &term.scale(&weight)
            });
            if !run.check(&[("n", n as i64), ("k", k as i64)], &src.delta(n, k), &rhs) {
                break 'outer;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify_stirling_form(src: &dyn PolySource, max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::StirlingForm, max_n)?;
    let mut run = Run::new(
        Identity::StirlingForm,
        &[("n", 2, max_n), ("k", 1, max_n.saturating_sub(1))],
    );
    'outer: for n in 2..=max_n {
        for k in 1..n {
            let sum = (1..=n - k).fold(UniPoly::zero(), |acc, m| {
                let weight = rat_int(binomial((m + k) as i64, (m + 1) as i64)) / n_pow(n, m);
                let term = &src.gamma(m + 1, n) * &src.delta(n, k + m);
                &acc + &term.scale(&weight)
            });
            let rhs = sum.scale(&Rational::new(One::one(), (n - k).into()));
            if !run.check(&[("n", n as i64), ("k", k as i64)], &src.delta(n, k), &rhs) {
                break 'outer;
            }
        }
    }
    run.notes
        .push("k = n skipped: the prefactor 1/(n-k) is undefined there; colyrel covers it".into());
    Ok(run.finish())
}

/// Right side of the coefficient identity with the outer sum running to `m_max`.
fn coefs_rhs(n: i64, k: i64, r: i64, m_max: i64) -> Rational {
    let mut total = Rational::zero();
    for m in 0..=m_max {
        let outer = binomial(m + n - k, m + 1);
        if outer.is_zero() {
            continue;
        }
        for i in 0..=r {
            let s1 = stirling1(n, i + n - k + m);
            if s1.is_zero() {
                continue;
            }
            let e = r - i + 1;
            let sign = if (m + r - i) % 2 == 0 { 1 } else { -1 };
            let numer = outer.clone()
                * binomial(i + n - k + m - 1, i)
                * factorial(e as u64)
                * stirling2(m + 1, e)
                * s1
                * sign;
            total += Rational::new(numer, num_traits::pow(n.into(), e as usize));
        }
    }
    total
}

pub fn verify_coefs(max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::Coefs, max_n)?;
    let mut run = Run::new(
        Identity::Coefs,
        &[("n", 1, max_n), ("k", 1, max_n), ("r", 0, max_n)],
    );
    let mut bound_disagreements = 0u64;
    'outer: for n in 1..=max_n as i64 {
        for k in 1..=n {
            for r in 0..=k {
                let lhs = rat_int(binomial(r + n - k - 1, r) * stirling1(n, r + n - k));
                let rhs = coefs_rhs(n, k, r, k);
                if coefs_rhs(n, k, r, n) != rhs {
                    bound_disagreements += 1;
                }
                if !run.check(&[("n", n), ("k", k), ("r", r)], &lhs, &rhs) {
                    break 'outer;
                }
            }
        }
    }
    run.notes.push(if bound_disagreements == 0 {
        "outer sum bound m <= k agrees with the extended bound m <= n in every case".into()
    } else {
        format!("outer sum bound m <= k disagrees with m <= n in {bound_disagreements} cases")
    });
    Ok(run.finish())
}

pub fn verify_star(max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::Star, max_n)?;
    let mut run = Run::new(Identity::Star, &[("n", 1, max_n), ("k", 1, max_n)]);
    'outer: for n in 1..=max_n as i64 {
        for k in 1..=n {
            let sum: Rational = (1..=k)
                .map(|m| {
                    let sign = if m % 2 == 0 { 1 } else { -1 };
                    rat_int(binomial(m + n - k, m + 1) * stirling1(n, n - k + m) * sign)
                })
                .sum();
            let rhs = sum / rat_int(k);
            if !run.check(&[("n", n), ("k", k)], &rat_int(stirling1(n, n - k)), &rhs) {
                break 'outer;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify_known_s1(max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::KnownS1, max_n)?;
    let mut run = Run::new(Identity::KnownS1, &[("n", 2, max_n)]);
    for n in 2..=max_n as i64 {
        if !run.check(
            &[("n", n), ("k", n - 1)],
            &stirling1(n, n - 1),
            &-binomial(n, 2),
        ) {
            break;
        }
        if n >= 3 {
            let closed = crate::exact::Integer::from(n * (n - 1) * (n - 2) * (3 * n - 1) / 24);
            if !run.check(&[("n", n), ("k", n - 2)], &stirling1(n, n - 2), &closed) {
                break;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify_frobenius(src: &dyn PolySource, max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::Frobenius, max_n)?;
    let mut run = Run::new(Identity::Frobenius, &[("k", 1, max_n), ("n", 1, max_n)]);
    'outer: for k in 1..=max_n {
        for n in 1..=max_n {
            let frob = gamma_via_frobenius(k, n)?;
            if !run.check(&[("k", k as i64), ("n", n as i64)], &src.gamma(k, n), &frob) {
                break 'outer;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify_delta_dual(src: &dyn PolySource, max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::DeltaDual, max_n)?;
    let mut run = Run::new(Identity::DeltaDual, &[("n", 1, max_n), ("k", 1, max_n)]);
    'outer: for n in 1..=max_n {
        for k in 1..=n {
            let brute = delta_poly_bruteforce(n, k, max_n)?;
            if !run.check(
                &[("n", n as i64), ("k", k as i64)],
                &src.delta(n, k),
                &brute,
            ) {
                break 'outer;
            }
        }
    }
    Ok(run.finish())
}

/// Derivative orders `k = 0..=max_k` at substitution points `a = 1..=6`.
pub fn verify_thm1(max_k: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::Thm1, max_k)?;
    const MAX_A: u32 = 6;
    let mut run = Run::new(Identity::Thm1, &[("k", 0, max_k), ("a", 1, MAX_A)]);
    'outer: for k in 0..=max_k {
        for a in 1..=MAX_A as u64 {
            let closed = derivative_closed_form(k, a)?;
            let chain = derivative_via_chain(k, a)?;
            if !run.check(&[("k", k as i64), ("a", a as i64)], &closed, &chain) {
                break 'outer;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify_new_n(max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::NewN, max_n)?;
    let mut run = Run::new(Identity::NewN, &[("n", 1, max_n)]);
    'outer: for n in 1..=max_n as usize {
        let lhs = eq_new_n_lhs(n);
        let rhs = eq_new_n_rhs(n);
        let mut monomials: Vec<&Vec<u32>> = lhs.terms().map(|(e, _)| e).collect();
        monomials.extend(rhs.terms().map(|(e, _)| e));
        monomials.sort();
        monomials.dedup();
        for exps in monomials {
            let mut params = vec![("n", n as i64)];
            let names: Vec<String> = (1..=n).map(|j| format!("deg_c{j}")).collect();
            params.extend(
                names
                    .iter()
                    .map(|s| s.as_str())
                    .zip(exps.iter().map(|&e| e as i64)),
            );
            if !run.check(&params, &lhs.coeff(exps), &rhs.coeff(exps)) {
                break 'outer;
            }
        }
    }
    run.notes.push(
        "only the permutation-summed form is checked, coefficient by coefficient in c".into(),
    );
    Ok(run.finish())
}

pub fn verify_i_nk(src: &dyn PolySource, max_n: u32) -> Result<IdentityReport> {
    check_ceiling(Identity::INk, max_n)?;
    let mut run = Run::new(Identity::INk, &[("n", 1, max_n), ("k", 0, max_n)]);
    'outer: for n in 1..=max_n {
        for k in 0..=n {
            let i = i_nk(n as usize, k as usize)?;
            let lhs = i
                .shift_down(n as usize)
                .map(|p| p.scale(&rat_int(factorial(n as u64))));
            let rhs = src.delta(n + 1, n - k + 1);
            let params = [("n", n as i64), ("k", k as i64)];
            let ok = match lhs {
                Some(lhs) => run.check(&params, &lhs, &rhs),
                // I_n^k not divisible by q^n: report the undivided value
                None => run.check(
                    &params,
                    &i,
                    &rhs.shift_up(n as usize)
                        .scale(&Rational::new(One::one(), factorial(n as u64))),
                ),
            };
            if !ok {
                break 'outer;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify(identity: Identity, src: &dyn PolySource, max_n: u32) -> Result<IdentityReport> {
    match identity {
        Identity::Colyrel => verify_colyrel(src, max_n),
        Identity::StirlingForm => verify_stirling_form(src, max_n),
        Identity::Coefs => verify_coefs(max_n),
        Identity::Star => verify_star(max_n),
        Identity::KnownS1 => verify_known_s1(max_n),
        Identity::Frobenius => verify_frobenius(src, max_n),
        Identity::DeltaDual => verify_delta_dual(src, max_n),
        Identity::Thm1 => verify_thm1(max_n),
        Identity::NewN => verify_new_n(max_n),
        Identity::INk => verify_i_nk(src, max_n),
    }
}

/// Runs every identity, each at `ceiling(identity)`, in a fixed order.
pub fn verify_all(
    src: &dyn PolySource,
    ceiling: impl Fn(Identity) -> u32,
) -> Result<Vec<IdentityReport>> {
    Identity::ALL
        .into_iter()
        .map(|id| verify(id, src, ceiling(id)))
        .collect()
}

/// The identities that read Gamma or Delta from a [`PolySource`].
pub const SOURCE_DRIVEN: [Identity; 5] = [
    Identity::Colyrel,
    Identity::StirlingForm,
    Identity::Frobenius,
    Identity::DeltaDual,
    Identity::INk,
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma_delta::{Canonical, Perturbed, PolyTarget};

    #[test]
    fn small_ranges_pass() {
        for id in Identity::ALL {
            let max_n = id.default_ceiling().min(4);
            let r = verify(id, &Canonical, max_n).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.counterexample);
            assert!(r.cases > 0, "{id}");
        }
    }

    #[test]
    fn colyrel_hand_examples() {
        // n=2, k=2: C(2,1) Gamma_1 Delta_{2,2} / 2 = Delta_{2,2}
        let r = verify_colyrel(&Canonical, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases, 3);
        // n=3, k=1: three terms reproduce q^2 - 3q + 2
        let src = Canonical;
        let rhs = (0..=2u32).fold(UniPoly::zero(), |acc, m| {
            let w = rat_int(binomial(1 + m as i64, 1 + m as i64)) / n_pow(3, 1 + m);
            &acc + &(&src.gamma(1 + m, 3) * &src.delta(3, 1 + m)).scale(&w)
        });
        assert_eq!(rhs, UniPoly::from_ints(&[2, -3, 1]));
    }

    #[test]
    fn coefs_first_case_by_hand() {
        // n=2, k=1, r=0: s1(2,1) = -C(2,2) s1(2,2) / ... reduces to -1 both sides
        assert_eq!(coefs_rhs(2, 1, 0, 1), rat_int(-1));
        assert_eq!(rat_int(binomial(0, 0) * stirling1(2, 1)), rat_int(-1));
    }

    #[test]
    fn stirling_form_notes_skip() {
        let r = verify_stirling_form(&Canonical, 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases, 3);
        assert!(r.notes[0].contains("k = n skipped"));
    }

    #[test]
    fn perturbation_is_caught_with_counterexample() {
        let src = Perturbed {
            target: PolyTarget::Delta { n: 4, k: 2 },
            power: 1,
        };
        let r = verify_colyrel(&src, 5).unwrap();
        assert_eq!(r.status, Status::Fail);
        let ce = r.counterexample.unwrap();
        assert_ne!(ce.lhs, ce.rhs);
        assert_eq!(ce.params["n"], 4);
    }

    #[test]
    fn ceilings_are_enforced() {
        assert!(matches!(
            verify_new_n(7).unwrap_err(),
            Error::BudgetExceeded {
                limit: 6,
                requested: 7,
                ..
            }
        ));
        assert!(verify_delta_dual(&Canonical, 17).is_err());
    }

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("nope".parse::<Identity>().is_err());
    }
}
