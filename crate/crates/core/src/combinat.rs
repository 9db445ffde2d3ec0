//! Enumeration helpers: distinct orderings of a multiset and k-subsets.

/// Distinct permutations of a multiset, in lexicographic order.
#[derive(Clone, Debug)]
pub struct DistinctPermutations {
    current: Vec<usize>,
    done: bool,
}

impl DistinctPermutations {
    pub fn new(mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        DistinctPermutations {
            current: items,
            done: false,
        }
    }

    /// Every ordering of the multiset with `counts[j]` copies of label `j`.
    pub fn from_counts(counts: &[u32]) -> Self {
        let items = counts
            .iter()
            .enumerate()
            .flat_map(|(label, &k)| std::iter::repeat_n(label, k as usize))
            .collect();
        Self::new(items)
    }
}

impl Iterator for DistinctPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

/// Advances to the next lexicographic permutation; false once wrapped.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> DistinctPermutations {
    DistinctPermutations::new((0..n).collect())
}

/// All `k`-element subsets of `0..n` as increasing index vectors.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
