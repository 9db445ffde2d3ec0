//! Path counts `A_c(i)` in the graph `E_c`.
//!
//! Vertex `i` of `E_c` has `c_j + i_last` edges to `i + e_j` for every
//! non-last coordinate `j`, and `c_last + (i_1 + ... + i_n)` edges to
//! `i + e_last`.

use std::fmt;
use std::sync::RwLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{rat_int, Integer, Rational};

/// Edge-multiplicity offsets `(c_1, ..., c_{n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamVec(Vec<u32>);

impl ParamVec {
    pub fn new(c: Vec<u32>) -> Result<Self> {
        if c.len() < 2 {
            return Err(invalid(format!(
                "parameter vector needs at least 2 entries, got {}",
                c.len()
            )));
        }
        Ok(ParamVec(c))
    }

    /// Number of entries, `n + 1`.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Number of non-last coordinates, `n`.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn last(&self) -> u32 {
        self.0[self.0.len() - 1]
    }

    pub fn head(&self) -> &[u32] {
        &self.0[..self.n()]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for ParamVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Lattice vertex `(i_1, ..., i_{n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(i: Vec<u32>) -> Self {
        MultiIndex(i)
    }

    /// `prefix` followed by `last`.
    pub fn with_last(prefix: &[u32], last: u32) -> Self {
        let mut v = prefix.to_vec();
        v.push(last);
        MultiIndex(v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

fn check_dims(c: &ParamVec, i: &MultiIndex) -> Result<()> {
    if c.dim() != i.0.len() {
        return Err(Error::DimensionMismatch {
            what: "multi-index",
            expected: c.dim(),
            found: i.0.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Default)]
struct DenseBox {
    extents: Vec<usize>,
    values: Vec<Integer>,
}

impl DenseBox {
    fn contains(&self, i: &[u32]) -> bool {
        !self.extents.is_empty() && i.iter().zip(&self.extents).all(|(&x, &e)| (x as usize) < e)
    }

    fn offset(&self, i: &[u32]) -> usize {
        i.iter()
            .zip(&self.extents)
            .fold(0, |acc, (&x, &e)| acc * e + x as usize)
    }
}

/// Memoized `A_c(i)` for a fixed `c`.
///
/// Values live in a dense box `[0, e_1) x ... x [0, e_{n+1})` that grows to
/// cover each query; filling walks the box in row-major order, so every
/// predecessor `i - e_j` is computed before `i`. Concurrent readers share the
/// lock, growth is exclusive.
#[derive(Debug)]
pub struct PathCountTable {
    c: ParamVec,
    cells: RwLock<DenseBox>,
}

impl PathCountTable {
    pub fn new(c: ParamVec) -> Self {
        PathCountTable {
            c,
            cells: RwLock::new(DenseBox::default()),
        }
    }

    pub fn params(&self) -> &ParamVec {
        &self.c
    }

    pub fn get(&self, i: &MultiIndex) -> Result<Integer> {
        check_dims(&self.c, i)?;
        {
            let cells = self.cells.read().expect("path table lock poisoned");
            if cells.contains(&i.0) {
                return Ok(cells.values[cells.offset(&i.0)].clone());
            }
        }
        let mut cells = self.cells.write().expect("path table lock poisoned");
        if !cells.contains(&i.0) {
            let extents = if cells.extents.is_empty() {
                i.0.iter().map(|&x| x as usize + 1).collect()
            } else {
                cells
                    .extents
                    .iter()
                    .zip(&i.0)
                    .map(|(&e, &x)| e.max(x as usize + 1))
                    .collect()
            };
            *cells = self.fill(extents);
        }
        Ok(cells.values[cells.offset(&i.0)].clone())
    }

    fn fill(&self, extents: Vec<usize>) -> DenseBox {
        let dim = extents.len();
        let n = dim - 1;
        let total: usize = extents.iter().product();
        let mut strides = vec![1usize; dim];
        for k in (0..dim - 1).rev() {
            strides[k] = strides[k + 1] * extents[k + 1];
        }
        let c = self.c.as_slice();
        let mut values: Vec<Integer> = Vec::with_capacity(total);
        let mut idx = vec![0u32; dim];
        for pos in 0..total {
            let v = if pos == 0 {
                Integer::one()
            } else {
                let last = idx[n];
                let m: u64 = idx[..n].iter().map(|&x| x as u64).sum();
                let mut acc = Integer::zero();
                if last > 0 {
                    acc += &values[pos - strides[n]] * (c[n] as u64 + m);
                }
                for j in 0..n {
                    if idx[j] > 0 {
                        acc += &values[pos - strides[j]] * (c[j] as u64 + last as u64);
                    }
                }
                acc
            };
            values.push(v);
            for k in (0..dim).rev() {
                idx[k] += 1;
                if (idx[k] as usize) < extents[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        DenseBox { extents, values }
    }
}

/// `A_c(i)` via the recurrence.
pub fn path_count(c: &ParamVec, i: &MultiIndex) -> Result<Integer> {
    PathCountTable::new(c.clone()).get(i)
}

/// Default cap on the number of steps `|i|` for brute-force enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 12;

/// `A_c(i)` by walking every ordering of the step multiset forward from the
/// origin and multiplying the edge multiplicities met along the way.
pub fn path_count_bruteforce(c: &ParamVec, i: &MultiIndex, budget: u64) -> Result<Integer> {
    check_dims(c, i)?;
    if i.total() > budget {
        return Err(Error::BudgetExceeded {
            what: "path length for enumeration",
            limit: budget,
            requested: i.total(),
        });
    }
    let mut walker = Walker {
        c: c.as_slice(),
        remaining: i.0.clone(),
        vertex: vec![0; i.0.len()],
    };
    match walker.sum_small(1, i.total()) {
        Some(v) => Ok(Integer::from(v)),
        None => Ok(walker.sum_big(&Integer::one())),
    }
}

struct Walker<'a> {
    c: &'a [u32],
    remaining: Vec<u32>,
    vertex: Vec<u32>,
}

impl Walker<'_> {
    fn multiplicity(&self, j: usize) -> u64 {
        let n = self.c.len() - 1;
        if j == n {
            self.c[n] as u64 + self.vertex[..n].iter().map(|&x| x as u64).sum::<u64>()
        } else {
            self.c[j] as u64 + self.vertex[n] as u64
        }
    }

    fn step(&mut self, j: usize) {
        self.remaining[j] -= 1;
        self.vertex[j] += 1;
    }

    fn unstep(&mut self, j: usize) {
        self.remaining[j] += 1;
        self.vertex[j] -= 1;
    }

    /// Sum of path products below the current vertex; `None` on overflow.
    /// Orderings whose product is already zero are not expanded further.
    fn sum_small(&mut self, prod: u128, left: u64) -> Option<u128> {
        if left == 0 {
            return Some(prod);
        }
        let mut total = 0u128;
        for j in 0..self.remaining.len() {
            if self.remaining[j] == 0 {
                continue;
            }
            let mult = self.multiplicity(j);
            if mult == 0 {
                continue;
            }
            let p = prod.checked_mul(mult as u128)?;
            self.step(j);
            let sub = self.sum_small(p, left - 1);
            self.unstep(j);
            total = total.checked_add(sub?)?;
        }
        Some(total)
    }

    fn sum_big(&mut self, prod: &Integer) -> Integer {
        if self.remaining.iter().all(|&r| r == 0) {
            return prod.clone();
        }
        let mut total = Integer::zero();
        for j in 0..self.remaining.len() {
            if self.remaining[j] == 0 {
                continue;
            }
            let p = prod * self.multiplicity(j);
            self.step(j);
            total += self.sum_big(&p);
            self.unstep(j);
        }
        total
    }
}

/// `A_c(prefix, h) / (c_last + m)^h` for `h = 1..=max_h`, with `m = |prefix|`.
pub fn ratio_sequence(c: &ParamVec, prefix: &[u32], max_h: u32) -> Result<Vec<Rational>> {
    if prefix.len() != c.n() {
        return Err(Error::DimensionMismatch {
            what: "prefix",
            expected: c.n(),
            found: prefix.len(),
        });
    }
    if max_h == 0 {
        return Err(invalid("max_h must be at least 1"));
    }
    let m: u64 = prefix.iter().map(|&x| x as u64).sum();
    let base = c.last() as u64 + m;
    if base == 0 {
        return Err(Error::DegenerateNormalizer);
    }
    let table = PathCountTable::new(c.clone());
    table.get(&MultiIndex::with_last(prefix, max_h))?;
    let mut denom = Integer::one();
    let mut out = Vec::with_capacity(max_h as usize);
    for h in 1..=max_h {
        denom *= base;
        let a = table.get(&MultiIndex::with_last(prefix, h))?;
        out.push(Rational::new(a, denom.clone()));
    }
    Ok(out)
}

/// Exact ratio at a single `h`.
pub fn ratio_at(c: &ParamVec, prefix: &[u32], h: u32) -> Result<Rational> {
    if h == 0 {
        return Ok(rat_int(1));
    }
    let seq = ratio_sequence(c, prefix, h)?;
    Ok(seq[h as usize - 1].clone())
}
