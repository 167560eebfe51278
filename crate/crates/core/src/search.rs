//! Backtracking enumeration of Dellac configurations.
//!
//! Both searches assign columns row by row from the bottom, trying columns in
//! increasing order, so they emit configurations in lexicographic order of the
//! row assignment. A search can be restarted below any fixed prefix; the
//! parallel drivers split the tree into prefixes, run the subtrees on the
//! current rayon pool and merge the partial results in prefix order, which
//! keeps every result independent of the thread count.

use rayon::prelude::*;

use crate::config::MAX_COLUMNS;

/// Prefix depth for the full search; `DC_9` splits into a few hundred subtrees.
pub(crate) const DELLAC_SPLIT_DEPTH: usize = 6;
/// Prefix depth (bottom-half rows) for the symmetric search.
pub(crate) const SYMMETRIC_SPLIT_DEPTH: usize = 4;

struct DellacSearch<'f, F> {
    n: usize,
    rows: Vec<u8>,
    counts: Vec<u8>,
    visit: &'f mut F,
}

impl<F: FnMut(&[u8])> DellacSearch<'_, F> {
    /// Places `prefix` and checks it is a legal partial assignment.
    fn seed(&mut self, prefix: &[u8]) -> bool {
        for &c in prefix {
            if !self.admissible(c) {
                return false;
            }
            self.place(c);
            if !self.closed_column_full() {
                return false;
            }
        }
        true
    }

    fn admissible(&self, c: u8) -> bool {
        let row = self.rows.len() + 1;
        let c = c as usize;
        c >= 1 && c <= self.n && c <= row && row <= self.n + c && self.counts[c] < 2
    }

    fn place(&mut self, c: u8) {
        self.rows.push(c);
        self.counts[c as usize] += 1;
    }

    fn unplace(&mut self) {
        let c = self.rows.pop().expect("unplace on empty search");
        self.counts[c as usize] -= 1;
    }

    /// The column whose band ends at the row just placed must be complete.
    fn closed_column_full(&self) -> bool {
        let row = self.rows.len();
        row <= self.n || self.counts[row - self.n] == 2
    }

    fn run(&mut self, stop: usize) {
        let row = self.rows.len() + 1;
        if self.rows.len() == stop {
            (self.visit)(&self.rows);
            return;
        }
        let lo = row.saturating_sub(self.n).max(1);
        let hi = row.min(self.n);
        for c in lo..=hi {
            if self.counts[c] < 2 {
                self.place(c as u8);
                if self.closed_column_full() {
                    self.run(stop);
                }
                self.unplace();
            }
        }
    }
}

fn dellac_search_from<F: FnMut(&[u8])>(n: usize, prefix: &[u8], stop: usize, visit: &mut F) {
    assert!(
        (1..=MAX_COLUMNS).contains(&n),
        "column count {n} out of range"
    );
    let mut s = DellacSearch {
        n,
        rows: Vec::with_capacity(2 * n),
        counts: vec![0; n + 1],
        visit,
    };
    if s.seed(prefix) {
        s.run(stop);
    }
}

/// Calls `visit` on the row assignment of every element of `DC_n`, in
/// lexicographic order.
pub fn for_each_dellac<F: FnMut(&[u8])>(n: usize, mut visit: F) {
    dellac_search_from(n, &[], 2 * n, &mut visit);
}

/// Completions of a fixed bottom prefix, in lexicographic order.
pub fn for_each_dellac_below<F: FnMut(&[u8])>(n: usize, prefix: &[u8], mut visit: F) {
    dellac_search_from(n, prefix, 2 * n, &mut visit);
}

/// Legal partial assignments of the bottom `depth` rows, in lexicographic
/// order. Some of them may have no completion.
pub fn dellac_prefixes(n: usize, depth: usize) -> Vec<Vec<u8>> {
    let depth = depth.min(2 * n);
    let mut out = Vec::new();
    dellac_search_from(n, &[], depth, &mut |rows: &[u8]| out.push(rows.to_vec()));
    out
}

/// Parallel fold over `DC_n`. `fold` sees configurations of one subtree in
/// lexicographic order; partial results are merged left to right in prefix
/// order.
pub fn fold_dellac<T, I, F, M>(n: usize, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u8]) + Sync,
    M: Fn(T, T) -> T,
{
    let prefixes = dellac_prefixes(n, DELLAC_SPLIT_DEPTH);
    let parts: Vec<T> = prefixes
        .par_iter()
        .map(|p| {
            let mut acc = init();
            for_each_dellac_below(n, p, |rows| fold(&mut acc, rows));
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

struct SymmetricSearch<'f, F> {
    n: usize,
    bottom: Vec<u8>,
    /// bottom-half points per column
    counts: Vec<u8>,
    full: Vec<u8>,
    visit: &'f mut F,
}

impl<F: FnMut(&[u8])> SymmetricSearch<'_, F> {
    fn pair_load(&self, c: usize) -> u8 {
        let partner = self.n + 1 - c;
        if partner == c {
            2 * self.counts[c]
        } else {
            self.counts[c] + self.counts[partner]
        }
    }

    fn admissible(&self, c: u8) -> bool {
        let row = self.bottom.len() + 1;
        let c = c as usize;
        c >= 1 && c <= row && c <= self.n && self.pair_load(c) < 2
    }

    fn seed(&mut self, prefix: &[u8]) -> bool {
        for &c in prefix {
            if !self.admissible(c) {
                return false;
            }
            self.bottom.push(c);
            self.counts[c as usize] += 1;
        }
        true
    }

    fn emit(&mut self) {
        let n = self.n;
        if !(1..=n).all(|c| self.pair_load(c) == 2) {
            return;
        }
        self.full.clear();
        self.full.extend_from_slice(&self.bottom);
        self.full
            .extend(self.bottom.iter().rev().map(|&c| (n + 1) as u8 - c));
        (self.visit)(&self.full);
    }

    fn run(&mut self, stop: usize) {
        if self.bottom.len() == stop {
            if stop == self.n {
                self.emit();
            } else {
                (self.visit)(&self.bottom);
            }
            return;
        }
        let row = self.bottom.len() + 1;
        for c in 1..=row.min(self.n) {
            if self.pair_load(c) < 2 {
                self.bottom.push(c as u8);
                self.counts[c] += 1;
                self.run(stop);
                self.counts[c] -= 1;
                self.bottom.pop();
            }
        }
    }
}

fn symmetric_search_from<F: FnMut(&[u8])>(n: usize, prefix: &[u8], stop: usize, visit: &mut F) {
    assert!(
        (1..=MAX_COLUMNS).contains(&n),
        "column count {n} out of range"
    );
    let mut s = SymmetricSearch {
        n,
        bottom: Vec::with_capacity(n),
        counts: vec![0; n + 1],
        full: Vec::with_capacity(2 * n),
        visit,
    };
    if s.seed(prefix) {
        s.run(stop);
    }
}

/// Calls `visit` on every centrally symmetric element of `DC_n`.
///
/// Only the bottom half is searched: row `i <= n` takes a column `c <= i`, the
/// mirrored row `2n+1-i` gets column `n+1-c`, and a bottom half is accepted
/// when each column pair `{j, n+1-j}` receives exactly two bottom points.
pub fn for_each_symmetric<F: FnMut(&[u8])>(n: usize, mut visit: F) {
    symmetric_search_from(n, &[], n, &mut visit);
}

pub fn for_each_symmetric_below<F: FnMut(&[u8])>(n: usize, prefix: &[u8], mut visit: F) {
    symmetric_search_from(n, prefix, n, &mut visit);
}

/// Partial bottom halves of length `depth` (capped below `n`), in
/// lexicographic order. Some of them may have no completion.
pub fn symmetric_prefixes(n: usize, depth: usize) -> Vec<Vec<u8>> {
    let depth = depth.min(n - 1);
    let mut out = Vec::new();
    symmetric_search_from(n, &[], depth, &mut |rows: &[u8]| out.push(rows.to_vec()));
    out
}

/// Parallel fold over the symmetric configurations of size `n`.
pub fn fold_symmetric<T, I, F, M>(n: usize, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u8]) + Sync,
    M: Fn(T, T) -> T,
{
    let prefixes = symmetric_prefixes(n, SYMMETRIC_SPLIT_DEPTH);
    let parts: Vec<T> = prefixes
        .par_iter()
        .map(|p| {
            let mut acc = init();
            for_each_symmetric_below(n, p, |rows| fold(&mut acc, rows));
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{is_symmetric_rows, validate_rows};

    fn count(n: usize) -> usize {
        let mut k = 0;
        for_each_dellac(n, |_| k += 1);
        k
    }

    #[test]
    fn small_counts() {
        let got: Vec<usize> = (1..=5).map(count).collect();
        assert_eq!(got, vec![1, 2, 7, 38, 295]);
    }

    #[test]
    fn output_is_sorted_and_valid() {
        let mut all = Vec::new();
        for_each_dellac(4, |r| all.push(r.to_vec()));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for r in &all {
            let r: Vec<usize> = r.iter().map(|&c| c as usize).collect();
            assert!(validate_rows(4, &r).unwrap().is_empty());
        }
    }

    #[test]
    fn symmetric_equals_filtered_full_search() {
        for n in 1..=6 {
            let mut full = Vec::new();
            for_each_dellac(n, |r| {
                if is_symmetric_rows(n, r) {
                    full.push(r.to_vec())
                }
            });
            let mut sym = Vec::new();
            for_each_symmetric(n, |r| sym.push(r.to_vec()));
            assert_eq!(full, sym, "n = {n}");
        }
    }

    #[test]
    fn prefixes_partition_the_tree() {
        for n in 1..=5 {
            for depth in 0..=2 * n {
                let mut merged = Vec::new();
                for p in dellac_prefixes(n, depth) {
                    for_each_dellac_below(n, &p, |r| merged.push(r.to_vec()));
                }
                let mut direct = Vec::new();
                for_each_dellac(n, |r| direct.push(r.to_vec()));
                assert_eq!(merged, direct, "n = {n}, depth = {depth}");
            }
        }
    }

    #[test]
    fn illegal_prefix_yields_nothing() {
        let mut k = 0;
        for_each_dellac_below(3, &[2], |_| k += 1);
        assert_eq!(k, 0);
        for_each_symmetric_below(3, &[1, 3], |_| k += 1);
        assert_eq!(k, 0);
    }

    #[test]
    fn fold_is_thread_count_independent() {
        let collect = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    fold_dellac(
                        6,
                        Vec::new,
                        |acc: &mut Vec<Vec<u8>>, r| acc.push(r.to_vec()),
                        |mut a, b| {
                            a.extend(b);
                            a
                        },
                    )
                })
        };
        let one = collect(1);
        assert_eq!(one.len(), 3098);
        assert_eq!(one, collect(4));
    }
}
