//! Growth constants `B_c(i_1..i_n) = lim_h A_c(i_1..i_n, h) / (c_{n+1} + m)^h`.
//!
//! Three routes are provided and cross-checked: the closed form summed over
//! label sequences, the convergent series truncated to a box, and (for the
//! all-ones prefix) the operator identity with `q = c_{n+1} + n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{permutations, DistinctPermutations};
use crate::error::{invalid, Error, Result};
use crate::exact::{
    factorial, rat_int, rat_pow, Integer, MultiPoly, MultiPolyC, Rational, UniPoly,
};
use crate::operators::eq_new_n_lhs;
use crate::paths::{ratio_sequence, ParamVec};
use crate::special::sigma_elementary;

/// How a [`BValue`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    TruncatedSeries { truncation: u32 },
    OperatorExact,
    RatioLimit { steps: u32 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ClosedForm => write!(f, "closed_form"),
            Provenance::TruncatedSeries { truncation } => {
                write!(f, "truncated_series(N={truncation})")
            }
            Provenance::OperatorExact => write!(f, "operator_exact"),
            Provenance::RatioLimit { steps } => write!(f, "ratio_limit(h={steps})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BValue {
    pub value: Rational,
    pub provenance: Provenance,
}

/// Largest `m` for which label sequences are enumerated in the series.
pub const MAX_SERIES_STEPS: u64 = 8;

fn check_prefix(c: &ParamVec, prefix: &[u32]) -> Result<u64> {
    if prefix.len() != c.n() {
        return Err(Error::DimensionMismatch {
            what: "prefix",
            expected: c.n(),
            found: prefix.len(),
        });
    }
    Ok(prefix.iter().map(|&x| x as u64).sum())
}

/// Label sequences `f: {1..m} -> {1..n}` with `|f^{-1}(j)| = i_j`, 0-based labels.
pub struct MapFamily {
    inner: DistinctPermutations,
}

impl MapFamily {
    pub fn new(prefix: &[u32]) -> Self {
        MapFamily {
            inner: DistinctPermutations::from_counts(prefix),
        }
    }

    /// `m! / (i_1! ... i_n!)`
    pub fn size(prefix: &[u32]) -> Integer {
        let m: u64 = prefix.iter().map(|&x| x as u64).sum();
        prefix
            .iter()
            .fold(factorial(m), |acc, &i| acc / factorial(i as u64))
    }
}

impl Iterator for MapFamily {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.inner.next()
    }
}

/// `((c_{n+1}+m)^m / m!) sum_{f in F} prod_j (c_{f(j)} + c_{n+1} + j - 1)`.
///
/// The sum over `F` is accumulated over partially used label counts rather
/// than by listing every sequence.
pub fn b_closed_form(c: &ParamVec, prefix: &[u32]) -> Result<Rational> {
    let m = check_prefix(c, prefix)?;
    let head = c.head();
    let last = c.last() as u64;
    let mut memo: HashMap<Vec<u32>, Integer> = HashMap::new();

    fn walk(
        used: &mut Vec<u32>,
        pos: u64,
        prefix: &[u32],
        head: &[u32],
        last: u64,
        memo: &mut HashMap<Vec<u32>, Integer>,
    ) -> Integer {
        if used.as_slice() == prefix {
            return Integer::one();
        }
        if let Some(v) = memo.get(used.as_slice()) {
            return v.clone();
        }
        let mut total = Integer::zero();
        for label in 0..prefix.len() {
            if used[label] == prefix[label] {
                continue;
            }
            used[label] += 1;
            let rest = walk(used, pos + 1, prefix, head, last, memo);
            used[label] -= 1;
            total += rest * (head[label] as u64 + last + pos);
        }
        memo.insert(used.clone(), total.clone());
        total
    }

    let sum = walk(&mut vec![0; prefix.len()], 0, prefix, head, last, &mut memo);
    let base = Integer::from(last + m);
    let scale = Rational::new(num_traits::pow(base, m as usize), factorial(m));
    Ok(scale * rat_int(sum))
}

/// Largest power `e` of `j` cached by [`scaled_power_sums`].
const CACHED_POWERS: usize = MAX_SERIES_STEPS as usize;

/// `sum_{j=0}^{N} j^e p^j Q^{N-j}` for `e = 0..=max_e`, shared across calls.
fn scaled_power_sums(p: u64, q: u64, n_trunc: u32, max_e: usize) -> Arc<Vec<Integer>> {
    type Cache = RwLock<HashMap<(u64, u64, u32), Arc<Vec<Integer>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    debug_assert!(max_e <= CACHED_POWERS);
    let key = (p, q, n_trunc);
    if let Some(v) = cache.read().expect("power-sum cache poisoned").get(&key) {
        return v.clone();
    }
    let sums = Arc::new(compute_power_sums(p, q, n_trunc, CACHED_POWERS));
    cache
        .write()
        .expect("power-sum cache poisoned")
        .entry(key)
        .or_insert(sums)
        .clone()
}

fn compute_power_sums(p: u64, q: u64, n_trunc: u32, max_e: usize) -> Vec<Integer> {
    let n = n_trunc as usize;
    let mut q_pows = Vec::with_capacity(n + 1);
    let mut acc = Integer::one();
    for _ in 0..=n {
        q_pows.push(acc.clone());
        acc *= q;
    }
    let mut sums = vec![Integer::zero(); max_e + 1];
    let mut p_pow = Integer::one();
    for j in 0..=n {
        let mut term = &p_pow * &q_pows[n - j];
        for slot in sums.iter_mut() {
            *slot += &term;
            term *= j as u64;
        }
        p_pow *= p;
    }
    sums
}

/// Polynomial in `j_1..j_m` with small integer coefficients.
type SmallPoly = HashMap<Vec<u8>, i128>;

/// `sum_{f in F} prod_{k=1}^m (c_{f(k)} + j_1 + ... + j_k)`, built backwards
/// over partially used label counts so that sequences sharing a tail share
/// its expansion.
fn series_body(head: &[u32], prefix: &[u32], m: usize) -> SmallPoly {
    fn walk(
        used: &mut Vec<u32>,
        pos: usize,
        head: &[u32],
        prefix: &[u32],
        m: usize,
        memo: &mut HashMap<Vec<u32>, SmallPoly>,
    ) -> SmallPoly {
        if pos == m {
            return SmallPoly::from([(vec![0u8; m], 1)]);
        }
        if let Some(p) = memo.get(used.as_slice()) {
            return p.clone();
        }
        let mut total = SmallPoly::new();
        for label in 0..prefix.len() {
            if used[label] == prefix[label] {
                continue;
            }
            used[label] += 1;
            let rest = walk(used, pos + 1, head, prefix, m, memo);
            used[label] -= 1;
            // multiply by c_label + j_1 + ... + j_{pos+1}
            for (exps, &coeff) in &rest {
                *total.entry(exps.clone()).or_default() += coeff * head[label] as i128;
                for v in 0..=pos {
                    let mut e = exps.clone();
                    e[v] += 1;
                    *total.entry(e).or_default() += coeff;
                }
            }
        }
        total.retain(|_, c| *c != 0);
        memo.insert(used.clone(), total.clone());
        total
    }
    walk(
        &mut vec![0; prefix.len()],
        0,
        head,
        prefix,
        m,
        &mut HashMap::new(),
    )
}

/// Partial sum of the series for `B_c(prefix)` over the box `0 <= j_k <= N`:
///
/// `sum_{f in F} sum_j prod_{k=1}^m (c_{f(k)} + j_1 + ... + j_k) r_k^{j_k}`,
/// `r_k = (c_{n+1} + k - 1)/(c_{n+1} + m)`.
///
/// The polynomial part is expanded in the `j_k`, after which the box sum
/// factors into one-dimensional power sums.
pub fn b_truncated_series(c: &ParamVec, prefix: &[u32], truncation: u32) -> Result<Rational> {
    let m = check_prefix(c, prefix)?;
    if m > MAX_SERIES_STEPS {
        return Err(Error::BudgetExceeded {
            what: "m for series label enumeration",
            limit: MAX_SERIES_STEPS,
            requested: m,
        });
    }
    let last = c.last() as u64;
    let q = last + m;
    if q == 0 {
        return Err(Error::DegenerateNormalizer);
    }
    let m = m as usize;
    let head = c.head();

    let body = series_body(head, prefix, m);
    let sums: Vec<Arc<Vec<Integer>>> = (0..m)
        .map(|k| scaled_power_sums(last + k as u64, q, truncation, m))
        .collect();
    let mut numer = Integer::zero();
    for (exps, coeff) in &body {
        let mut t = Integer::from(*coeff);
        for (k, &e) in exps.iter().enumerate() {
            t *= &sums[k][e as usize];
        }
        numer += t;
    }
    let denom = num_traits::pow(Integer::from(q), m * truncation as usize);
    Ok(Rational::new(numer, denom))
}

/// Smallest truncation `N <= max_truncation` whose partial sum is within
/// `rel_tol * B` of the closed form, if any.
pub fn series_truncation_needed(
    c: &ParamVec,
    prefix: &[u32],
    rel_tol: &Rational,
    max_truncation: u32,
) -> Result<Option<u32>> {
    let exact = b_closed_form(c, prefix)?;
    let bound = &exact * rel_tol;
    let within =
        |n: u32| -> Result<bool> { Ok((&exact - b_truncated_series(c, prefix, n)?).abs() < bound) };
    if !within(max_truncation)? {
        return Ok(None);
    }
    // partial sums increase with N, so the error is monotone
    let (mut lo, mut hi) = (0u32, max_truncation);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if within(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// The operator route for one dimension `n`, expanded once and reusable
/// across parameter vectors.
#[derive(Clone, Debug)]
pub struct OperatorForm {
    n: usize,
    lhs: MultiPoly<UniPoly>,
}

impl OperatorForm {
    pub fn new(n: usize) -> Self {
        OperatorForm {
            n,
            lhs: eq_new_n_lhs(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &MultiPoly<UniPoly> {
        &self.lhs
    }

    /// `B_c(1, ..., 1)` at the given `c`.
    pub fn evaluate(&self, c: &ParamVec) -> Result<Rational> {
        if c.n() != self.n {
            return Err(Error::DimensionMismatch {
                what: "parameter vector",
                expected: self.n + 1,
                found: c.dim(),
            });
        }
        let point: Vec<Rational> = c.head().iter().map(|&x| rat_int(x)).collect();
        let q = rat_int(c.last() as u64 + self.n as u64);
        Ok(self.lhs.eval(&point).eval(&q))
    }

    /// The same value as a polynomial in `c_1, ..., c_{n+1}`.
    pub fn symbolic(&self) -> MultiPolyC {
        let vars = self.n + 1;
        let q =
            MultiPolyC::var(vars, self.n).add(&MultiPolyC::constant(vars, rat_int(self.n as i64)));
        let mut out = MultiPolyC::zero(vars);
        for (exps, coeff) in self.lhs.terms() {
            let in_q = coeff
                .coeffs()
                .iter()
                .rev()
                .fold(MultiPolyC::zero(vars), |acc, a| {
                    acc.mul(&q).add(&MultiPolyC::constant(vars, a.clone()))
                });
            let mut mono_exps = exps.clone();
            mono_exps.push(0);
            let mut mono = MultiPolyC::zero(vars);
            mono.add_term(mono_exps, Rational::one());
            out = out.add(&mono.mul(&in_q));
        }
        out
    }
}

/// `B_c(1, ..., 1)` through the operator identity.
pub fn b_operator_exact(c: &ParamVec, prefix: &[u32]) -> Result<Rational> {
    check_prefix(c, prefix)?;
    if prefix.iter().any(|&x| x != 1) {
        return Err(invalid(
            "operator form is only available for the all-ones prefix",
        ));
    }
    OperatorForm::new(c.n()).evaluate(c)
}

/// The closed form for the all-ones prefix as a polynomial in `c_1..c_{n+1}`:
/// `((c_{n+1}+n)^n / n!) sum_xi prod_k (c_{xi(k)} + c_{n+1} + k - 1)`.
pub fn b_closed_form_symbolic(n: usize) -> MultiPolyC {
    let vars = n + 1;
    let last = MultiPolyC::var(vars, n);
    let sum = permutations(n).fold(MultiPolyC::zero(vars), |acc, xi| {
        let prod = (0..n).fold(MultiPolyC::one(vars), |p, k| {
            let factor = MultiPolyC::var(vars, xi[k])
                .add(&last)
                .add(&MultiPolyC::constant(vars, rat_int(k as i64)));
            p.mul(&factor)
        });
        acc.add(&prod)
    });
    let base = last.add(&MultiPolyC::constant(vars, rat_int(n as i64)));
    sum.mul(&base.pow(n as u32))
        .scale(&Rational::new(Integer::one(), factorial(n as u64)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Series { truncation: u32 },
    Operator,
}

pub fn compute_b(c: &ParamVec, prefix: &[u32], method: Method) -> Result<BValue> {
    let (value, provenance) = match method {
        Method::Closed => (b_closed_form(c, prefix)?, Provenance::ClosedForm),
        Method::Series { truncation } => (
            b_truncated_series(c, prefix, truncation)?,
            Provenance::TruncatedSeries { truncation },
        ),
        Method::Operator => (b_operator_exact(c, prefix)?, Provenance::OperatorExact),
    };
    Ok(BValue { value, provenance })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitRow {
    pub h: u32,
    pub ratio: Rational,
    pub error: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub limit: BValue,
    pub tolerance: Rational,
    pub rows: Vec<LimitRow>,
    pub final_error: Rational,
    pub pass: bool,
    /// `error(h) / error(h-1)` at the last step, when defined.
    pub decay_factor: Option<Rational>,
    /// `(c_{n+1} + m - 1) / (c_{n+1} + m)`, the ratio the decay tends to.
    pub expected_decay: Rational,
}

/// Compares `A_c(prefix, h) / (c_{n+1}+m)^h` with the closed form for
/// `h = 1..=steps`.
pub fn limit_verify(
    c: &ParamVec,
    prefix: &[u32],
    steps: u32,
    tol: &Rational,
) -> Result<LimitReport> {
    let m = check_prefix(c, prefix)?;
    let limit = b_closed_form(c, prefix)?;
    let ratios = ratio_sequence(c, prefix, steps)?;
    let rows: Vec<LimitRow> = ratios
        .into_iter()
        .enumerate()
        .map(|(k, ratio)| LimitRow {
            h: k as u32 + 1,
            error: (&ratio - &limit).abs(),
            ratio,
        })
        .collect();
    let final_error = rows.last().map(|r| r.error.clone()).unwrap_or_default();
    let decay_factor = match rows.as_slice() {
        [.., prev, last] if !prev.error.is_zero() => Some(&last.error / &prev.error),
        _ => None,
    };
    let q = c.last() as u64 + m;
    Ok(LimitReport {
        limit: BValue {
            value: limit,
            provenance: Provenance::ClosedForm,
        },
        tolerance: tol.clone(),
        pass: final_error < *tol,
        final_error,
        rows,
        decay_factor,
        expected_decay: Rational::new(Integer::from(q) - 1, Integer::from(q)),
    })
}

/// `alpha_{i,n}(c_last)` for `i = 0..=n`: the coefficients of `c_1^i` in
/// `((c_2+n)^n / n!) prod_{k=1}^n (c_1 + c_2 + k - 1)` with `c_2 = c_last`.
pub fn alpha_decomposition(n: u32, c_last: u32) -> Vec<Rational> {
    let prod = (1..=n as i64).fold(UniPoly::one(), |acc, k| {
        &acc * &UniPoly::linear_root(-rat_int(c_last as i64 + k - 1))
    });
    let scale = rat_pow(&rat_int(c_last as i64 + n as i64), n as i64)
        / Rational::from_integer(factorial(n as u64));
    let p = prod.scale(&scale);
    (0..=n as usize).map(|i| p.coeff(i)).collect()
}

/// Reassembles `B_c(1..1) = sum_i i! (n-i)! sigma_i(c) alpha_{i,n}(c_{n+1})`.
pub fn b_from_alphas(head: &[u32], alphas: &[Rational]) -> Result<Rational> {
    let n = head.len();
    if alphas.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            what: "alpha coefficients",
            expected: n + 1,
            found: alphas.len(),
        });
    }
    let values: Vec<Integer> = head.iter().map(|&x| Integer::from(x)).collect();
    Ok(alphas
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (i, a)| {
            let weight =
                factorial(i as u64) * factorial((n - i) as u64) * sigma_elementary(&values, i);
            acc + a * rat_int(weight)
        }))
}
