//! Eulerian numbers, Stirling numbers of both kinds, binomials, falling
//! factorials and elementary symmetric functions.
//!
//! The three triangles are generated row by row and cached process-wide.
//! Row `r` of the Eulerian triangle holds `A(i, r - i)` for `i = 0..=r`; row
//! `n` of the Stirling triangles holds the entries for second index `0..=n`.
//! Any query outside a triangle returns zero.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::exact::{rat_int, Integer, UniPoly};

type RowFn = fn(&[Integer], usize) -> Vec<Integer>;

/// Lazily grown triangular table. Readers share the lock; growth takes it
/// exclusively.
pub struct Triangle {
    rows: RwLock<Vec<Vec<Integer>>>,
    next_row: RowFn,
}

impl Triangle {
    const fn new(next_row: RowFn) -> Self {
        Triangle {
            rows: RwLock::new(Vec::new()),
            next_row,
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Integer {
        if col > row {
            return Integer::zero();
        }
        {
            let rows = self.rows.read().expect("triangle lock poisoned");
            if let Some(r) = rows.get(row) {
                return r[col].clone();
            }
        }
        let mut rows = self.rows.write().expect("triangle lock poisoned");
        while rows.len() <= row {
            let r = rows.len();
            let new_row = match rows.last() {
                Some(prev) => (self.next_row)(prev, r),
                None => vec![Integer::one()],
            };
            rows.push(new_row);
        }
        rows[row][col].clone()
    }

    pub fn row(&self, row: usize) -> Vec<Integer> {
        (0..=row).map(|c| self.get(row, c)).collect()
    }
}

fn at(row: &[Integer], idx: i64) -> Integer {
    usize::try_from(idx)
        .ok()
        .and_then(|i| row.get(i).cloned())
        .unwrap_or_default()
}

// A(i, j) = (i+1) A(i, j-1) + (j+1) A(i-1, j), with A(i, j-1) at position i
// and A(i-1, j) at position i-1 of the previous row.
fn eulerian_row(prev: &[Integer], r: usize) -> Vec<Integer> {
    (0..=r as i64)
        .map(|i| {
            let j = r as i64 - i;
            at(prev, i) * (i + 1) + at(prev, i - 1) * (j + 1)
        })
        .collect()
}

// (q)_n = (q)_{n-1} (q - (n-1))
fn stirling1_row(prev: &[Integer], n: usize) -> Vec<Integer> {
    (0..=n as i64)
        .map(|k| at(prev, k - 1) - at(prev, k) * (n as i64 - 1))
        .collect()
}

fn stirling2_row(prev: &[Integer], k: usize) -> Vec<Integer> {
    (0..=k as i64)
        .map(|m| at(prev, m - 1) + at(prev, m) * m)
        .collect()
}

fn eulerian_table() -> &'static Triangle {
    static T: OnceLock<Triangle> = OnceLock::new();
    T.get_or_init(|| Triangle::new(eulerian_row))
}

fn stirling1_table() -> &'static Triangle {
    static T: OnceLock<Triangle> = OnceLock::new();
    T.get_or_init(|| Triangle::new(stirling1_row))
}

fn stirling2_table() -> &'static Triangle {
    static T: OnceLock<Triangle> = OnceLock::new();
    T.get_or_init(|| Triangle::new(stirling2_row))
}

/// Eulerian number `A(i, j)`: permutations of `i + j + 1` letters with `i` descents.
pub fn eulerian(i: i64, j: i64) -> Integer {
    if i < 0 || j < 0 {
        return Integer::zero();
    }
    eulerian_table().get((i + j) as usize, i as usize)
}

/// Signed Stirling number of the first kind: coefficient of `q^k` in `(q)_n`.
pub fn stirling1(n: i64, k: i64) -> Integer {
    if n < 0 || k < 0 {
        return Integer::zero();
    }
    stirling1_table().get(n as usize, k as usize)
}

/// Stirling number of the second kind: partitions of a `k`-set into `m` blocks.
pub fn stirling2(k: i64, m: i64) -> Integer {
    if k < 0 || m < 0 {
        return Integer::zero();
    }
    stirling2_table().get(k as usize, m as usize)
}

/// `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> Integer {
    if b < 0 || b > a {
        return Integer::zero();
    }
    let b = b.min(a - b);
    (0..b).fold(Integer::one(), |acc, t| acc * (a - t) / (t + 1))
}

/// `q (q-1) ... (q-n+1)`
pub fn falling_factorial(n: u32) -> UniPoly {
    (0..n as i64).fold(UniPoly::one(), |acc, t| {
        &acc * &UniPoly::linear_root(rat_int(t))
    })
}

/// Elementary symmetric function `sigma_i` of the given values.
pub fn sigma_elementary(values: &[Integer], i: usize) -> Integer {
    let mut e = vec![Integer::zero(); i + 1];
    e[0] = Integer::one();
    for v in values {
        for k in (1..=i).rev() {
            let add = &e[k - 1] * v;
            e[k] += add;
        }
    }
    e.swap_remove(i)
}

pub fn eulerian_row_values(r: usize) -> Vec<Integer> {
    eulerian_table().row(r)
}

pub fn stirling1_row_values(n: usize) -> Vec<Integer> {
    stirling1_table().row(n)
}

pub fn stirling2_row_values(k: usize) -> Vec<Integer> {
    stirling2_table().row(k)
}
