//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Signed, Zero};

use pathcount::asymptotics::{b_closed_form, b_truncated_series, limit_verify, OperatorForm};
use pathcount::exact::{factorial, rat_int, rat_pow, Integer, MultiPoly, Rational, UniPoly};
use pathcount::gamma_delta::{
    delta_poly, delta_poly_bruteforce, Canonical, Perturbed, PolySource, PolyTarget,
};
use pathcount::identities::{
    verify, verify_coefs, verify_colyrel, verify_delta_dual, verify_frobenius, verify_i_nk,
    verify_known_s1, verify_new_n, verify_star, verify_stirling_form, verify_thm1, IdentityReport,
    SOURCE_DRIVEN,
};
use pathcount::operators::{derivative_closed_form, eq_new_n_lhs, eq_new_n_rhs, DOperatorPoly};
use pathcount::paths::{path_count, path_count_bruteforce, ratio_sequence, PathCountTable};
use pathcount::special::{eulerian, stirling1};
use pathcount::{MultiIndex, ParamVec};

/// Why a criterion failed.
struct Failure(String);

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure(s)
    }
}

impl From<pathcount::Error> for Failure {
    fn from(e: pathcount::Error) -> Self {
        Failure(e.to_string())
    }
}

type Check = Result<String, Failure>;

/// A named check.
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Every vector of length `len` with entries in `0..=max`.
fn boxes(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every vector of length `len` with entry sum at most `total`.
fn simplex(len: usize, total: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    (0..=total)
        .flat_map(|first| {
            simplex(len - 1, total - first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn pv(v: &[u32]) -> ParamVec {
    ParamVec::new(v.to_vec()).unwrap()
}

fn report_ok(r: &IdentityReport) -> Result<(), String> {
    ensure(r.passed(), || {
        format!("{} failed: {:?}", r.identity, r.counterexample)
    })
}

fn recurrence_matches_bruteforce() -> Check {
    let mut cases = 0u64;
    for dim in 2..=4 {
        let indices = simplex(dim, 10);
        for c in boxes(dim, 3) {
            let table = PathCountTable::new(pv(&c));
            for i in &indices {
                let i = MultiIndex::new(i.clone());
                let fast = table.get(&i).unwrap();
                let slow = path_count_bruteforce(table.params(), &i, 10).unwrap();
                ensure(fast == slow, || {
                    format!("c={c:?} i={i}: recurrence {fast} vs brute force {slow}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (c, i) pairs equal"))
}

fn eulerian_identification() -> Check {
    let c = pv(&[1, 1]);
    for s in 0..=12u32 {
        let mut row = Integer::zero();
        for i in 0..=s {
            let j = s - i;
            let a = path_count(&c, &MultiIndex::new(vec![i, j])).unwrap();
            ensure(a == eulerian(i as i64, j as i64), || {
                format!("A({i},{j}) mismatch: {a}")
            })?;
            row += a;
        }
        ensure(row == factorial(s as u64 + 1), || {
            format!("row {s} sums to {row}")
        })?;
    }
    Ok("A_(1,1)(i,j) = A(i,j) and row sums (i+j+1)! for i+j <= 12".into())
}

fn limit_convergence() -> Check {
    let two_d = ratio_sequence(&pv(&[1, 1]), &[1], 30).unwrap();
    for (k, r) in two_d.iter().enumerate() {
        let h = k as i64 + 1;
        let err = (rat_int(4) - r).abs();
        let expected = Rational::new((h + 3).into(), Integer::one() << h as usize);
        ensure(err == expected, || {
            format!("h={h}: error {err}, expected {expected}")
        })?;
    }
    let e20 = (rat_int(4) - &two_d[19]).abs();
    let e30 = (rat_int(4) - &two_d[29]).abs();
    ensure(e20 < rat(1, 1000), || format!("h=20 error {e20}"))?;
    ensure(e30 < rat(1, 1_000_000), || format!("h=30 error {e30}"))?;

    let tol = rat(1, 10_000);
    let report = limit_verify(&pv(&[1, 1, 1]), &[1, 1], 50, &tol).unwrap();
    let first = report.rows.iter().find(|r| r.error < tol).map(|r| r.h);
    ensure(report.pass, || {
        format!("(1,1,1): error at h=50 is {}", report.final_error)
    })?;
    let e50: f64 = num_traits::ToPrimitive::to_f64(&report.final_error).unwrap();
    Ok(format!(
        "(1,1): error = (h+3)/2^h exactly; (1,1,1),(1,1): B = {}, error < 1e-4 from h = {}, {:.3e} at h = 50",
        report.limit.value,
        first.unwrap(),
        e50
    ))
}

fn three_way_b_agreement() -> Check {
    let rel = rat(1, 1_000_000);
    let n_trunc = 400;
    let mut unit_cases = 0u64;
    for n in 1..=4usize {
        let form = OperatorForm::new(n);
        let ones = vec![1u32; n];
        for c in boxes(n + 1, 3) {
            let c = pv(&c);
            let closed = b_closed_form(&c, &ones).unwrap();
            let op = form.evaluate(&c).unwrap();
            ensure(closed == op, || {
                format!("c={c}: closed {closed} vs operator {op}")
            })?;
            let series = b_truncated_series(&c, &ones, n_trunc).unwrap();
            ensure((&closed - &series).abs() <= &closed * &rel, || {
                format!("c={c}: series at N={n_trunc} misses {closed} by more than 1e-6 relative")
            })?;
            unit_cases += 1;
        }
    }
    let mut general_cases = 0u64;
    for n in 1..=4usize {
        let prefixes: Vec<Vec<u32>> = simplex(n, 4)
            .into_iter()
            .filter(|p| p.iter().any(|&x| x != 1))
            .collect();
        for c in boxes(n + 1, 3) {
            let c = pv(&c);
            for prefix in &prefixes {
                let closed = b_closed_form(&c, prefix).unwrap();
                let series = match b_truncated_series(&c, prefix, n_trunc) {
                    Ok(s) => s,
                    // c_{n+1} + m = 0: no growth constant to compare
                    Err(pathcount::Error::DegenerateNormalizer) => continue,
                    Err(e) => return Err(e.into()),
                };
                ensure((&closed - &series).abs() <= &closed * &rel, || {
                    format!("c={c} prefix={prefix:?}: series misses {closed}")
                })?;
                general_cases += 1;
            }
        }
    }
    Ok(format!(
        "{unit_cases} all-ones cases (closed = operator, series within 1e-6 at N=400); {general_cases} general prefixes m <= 4"
    ))
}

fn closed_form_derivative() -> Check {
    report_ok(&verify_thm1(10)?)?;
    let q = UniPoly::var();
    for a in 1..=6u64 {
        let qa = UniPoly::linear_root(rat_int(a));
        let scale = |k: i64| rat_pow(&rat_int(a), -k - 1);
        let k1 = (&q * &qa).scale(&scale(1));
        let k2 = (&(&q.pow(2) * &qa) + &(&q * &qa.pow(2))).scale(&scale(2));
        let k3 = (&(&(&q.pow(3) * &qa) + &(&q.pow(2) * &qa.pow(2)).scale(&rat_int(4)))
            + &(&q * &qa.pow(3)))
            .scale(&scale(3));
        for (k, expected) in [(1, k1), (2, k2), (3, k3)] {
            let got = derivative_closed_form(k, a).unwrap();
            ensure(got == expected, || format!("k={k} a={a}: {got}"))?;
        }
    }
    Ok("closed form = u d/du chain for k <= 10, a <= 6; k = 1, 2, 3 examples reproduced".into())
}

fn operator_identity() -> Check {
    let r = verify_new_n(5)?;
    report_ok(&r)?;
    let q = UniPoly::var();
    let half_q2 = UniPoly::monomial(rat(1, 2), 2);
    let one = |x: i64| UniPoly::linear_root(rat_int(x));
    // D_2 (D_2 + D_1) pi_2 = (q^2/2)(q-1)(q-2)
    let op = DOperatorPoly::d(2, 2).mul(&DOperatorPoly::tail_sum(2, 1));
    let applied = op.apply_to_pi().coeff(&[0, 0]);
    let expected = &(&half_q2 * &one(1)) * &one(2);
    ensure(applied == expected, || {
        format!("D_2(D_2+D_1) pi_2 = {applied}")
    })?;
    // pi_2 = q^2/2
    let pi = DOperatorPoly::one(2).apply_to_pi().coeff(&[0, 0]);
    ensure(pi == half_q2, || format!("pi_2 = {pi}"))?;
    // right side for n = 2, written out
    let c1 = MultiPoly::<UniPoly>::var(2, 0);
    let c2 = MultiPoly::<UniPoly>::var(2, 1);
    let lin = |x: i64| MultiPoly::constant(2, one(x));
    let rhs2 = c1
        .add(&lin(1))
        .mul(&c2.add(&lin(2)))
        .add(&c2.add(&lin(1)).mul(&c1.add(&lin(2))))
        .scale(&half_q2);
    ensure(eq_new_n_rhs(2) == rhs2, || {
        "n=2 right side differs from its expansion".into()
    })?;
    ensure(eq_new_n_lhs(2) == rhs2, || {
        "n=2 left side differs from the right side".into()
    })?;
    let at_zero = eq_new_n_lhs(2).coeff(&[0, 0]);
    let expected0 = &(&(&q * &q) * &one(1)) * &one(2);
    ensure(at_zero == expected0, || format!("c=(0,0): {at_zero}"))?;
    Ok(format!("both sides equal as polynomials in (c, q) for n <= 5 ({} coefficients); n=2 examples reproduced", r.cases))
}

fn frobenius() -> Check {
    let r = verify_frobenius(&Canonical, 12)?;
    report_ok(&r)?;
    Ok(format!("{} (k, n) pairs with k, n <= 12", r.cases))
}

fn delta_definitions() -> Check {
    let r = verify_delta_dual(&Canonical, 12)?;
    report_ok(&r)?;
    for (n, k, coeffs) in [
        (2u32, 1u32, vec![-1i64, 1]),
        (3, 2, vec![-3, 2]),
        (3, 1, vec![2, -3, 1]),
    ] {
        let expected = UniPoly::from_ints(&coeffs);
        let d = delta_poly(n, k).unwrap().poly;
        let b = delta_poly_bruteforce(n, k, 16).unwrap();
        ensure(d == expected && b == expected, || {
            format!("Delta_{{{n},{k}}} = {d} / {b}")
        })?;
    }
    Ok(format!(
        "{} (n, k) pairs with n <= 12; q-1, 2q-3, q^2-3q+2 reproduced",
        r.cases
    ))
}

fn i_nk_identity() -> Check {
    let r = verify_i_nk(&Canonical, 6)?;
    report_ok(&r)?;
    Ok(format!(
        "n! I_n^k / q^n = Delta_(n+1,n-k+1) for {} (n, k) with n <= 6",
        r.cases
    ))
}

fn identity_suite() -> Check {
    let reports = [
        verify_colyrel(&Canonical, 10)?,
        verify_stirling_form(&Canonical, 10)?,
        verify_coefs(10)?,
        verify_star(30)?,
        verify_known_s1(30)?,
    ];
    for r in &reports {
        report_ok(r)?;
    }
    ensure(stirling1(5, 4) == Integer::from(-10), || "s1(5,4)".into())?;
    ensure(stirling1(5, 3) == Integer::from(35), || "s1(5,3)".into())?;
    let summary: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {}", r.identity, r.cases))
        .collect();
    Ok(format!("cases: {}", summary.join(", ")))
}

fn mutation_sensitivity() -> Check {
    const MAX: u32 = 12;
    let mut targets = Vec::new();
    for n in 1..=MAX {
        for k in 1..=MAX {
            let deg = Canonical.gamma(k, n).degree().unwrap_or(0);
            targets.extend((0..=deg).map(|power| (PolyTarget::Gamma { k, n }, power)));
        }
        for k in 1..=n {
            let deg = Canonical.delta(n, k).degree().unwrap_or(0);
            targets.extend((0..=deg).map(|power| (PolyTarget::Delta { n, k }, power)));
        }
    }
    let mut caught_by = std::collections::BTreeMap::<String, u64>::new();
    for &(target, power) in &targets {
        let src = Perturbed { target, power };
        let mut caught = false;
        for id in SOURCE_DRIVEN {
            let r = verify(id, &src, id.default_ceiling())?;
            if !r.passed() {
                let ce = r
                    .counterexample
                    .as_ref()
                    .ok_or_else(|| format!("{id} failed without a counterexample"))?;
                ensure(ce.lhs != ce.rhs, || {
                    format!("{id}: counterexample sides are equal")
                })?;
                *caught_by.entry(id.to_string()).or_default() += 1;
                caught = true;
                break;
            }
        }
        ensure(caught, || {
            format!("perturbing {target:?} at q^{power} went unnoticed")
        })?;
    }
    let by: Vec<String> = caught_by.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!(
        "{} single-coefficient mutants all caught (first failing check: {})",
        targets.len(),
        by.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "path count recurrence equals brute-force enumeration",
            recurrence_matches_bruteforce,
        ),
        (
            "c = (1,1) counts are the Eulerian numbers",
            eulerian_identification,
        ),
        (
            "normalized counts converge to the closed-form B",
            limit_convergence,
        ),
        (
            "closed form, operator form and truncated series agree",
            three_way_b_agreement,
        ),
        ("(u d/du)^k (1-u)^-1 closed form", closed_form_derivative),
        ("permutation-summed operator identity", operator_identity),
        ("Gamma equals its Eulerian (Frobenius) form", frobenius),
        ("two definitions of Delta agree", delta_definitions),
        ("I_n^k in terms of Delta", i_nk_identity),
        ("Gamma/Delta/Stirling identity suite", identity_suite),
        (
            "single-coefficient mutations are detected",
            mutation_sensitivity,
        ),
    ];
    let mut failures = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(Failure(format!("panicked: {msg}")))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name} [{secs:.1}s]: {detail}", idx + 1),
            Err(Failure(detail)) => {
                failures += 1;
                println!("FAIL {:>2}. {name} [{secs:.1}s]: {detail}", idx + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
