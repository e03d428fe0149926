//! Transitive coset tables: standardization, canonical forms and the
//! low-index backtracking search.
//!
//! Tables are flat, entry `i * n + p` holding `g_i · p`. The scan order used
//! for labelling is: points in label order, then generators, then `+` before
//! `-`.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::par::{Budget, Context};
use crate::presentation::Word;

pub(crate) const UNDEF: u32 = u32::MAX;

pub(crate) fn inverse_table(table: &[u32], k: usize, n: usize) -> Vec<u32> {
    let mut inv = vec![UNDEF; k * n];
    for i in 0..k {
        for p in 0..n {
            let q = table[i * n + p];
            if q != UNDEF {
                inv[i * n + q as usize] = p as u32;
            }
        }
    }
    inv
}

/// Relabels a transitive table by first appearance in scan order from `b`.
/// Returns the new table and the old-to-new label map.
pub(crate) fn standardize(table: &[u32], inv: &[u32], k: usize, n: usize, b: usize) -> (Vec<u32>, Vec<u32>) {
    let mut lab = vec![UNDEF; n];
    let mut order = Vec::with_capacity(n);
    lab[b] = 0;
    order.push(b);
    let mut idx = 0;
    while idx < order.len() {
        let p = order[idx];
        idx += 1;
        for i in 0..k {
            for t in [table, inv] {
                let q = t[i * n + p] as usize;
                if lab[q] == UNDEF {
                    lab[q] = order.len() as u32;
                    order.push(q);
                }
            }
        }
    }
    debug_assert_eq!(order.len(), n, "table is not transitive");
    let mut out = vec![0; k * n];
    for i in 0..k {
        for p in 0..n {
            out[i * n + lab[p] as usize] = lab[table[i * n + p] as usize];
        }
    }
    (out, lab)
}

/// Smallest standardized table over all basepoints, the first basepoint
/// attaining it, and the number of basepoints attaining it.
pub(crate) fn canonical(table: &[u32], k: usize, n: usize) -> (Vec<u32>, usize, usize) {
    let inv = inverse_table(table, k, n);
    let mut best = standardize(table, &inv, k, n, 0).0;
    let (mut at, mut ties) = (0, 1);
    for b in 1..n {
        let t = standardize(table, &inv, k, n, b).0;
        match t.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = t;
                at = b;
                ties = 1;
            }
            std::cmp::Ordering::Equal => ties += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    (best, at, ties)
}

/// For a table already standard from 0: `Some(deck order)` when it is the
/// canonical member of its conjugacy class, `None` otherwise.
fn canonical_deck(table: &[u32], inv: &[u32], k: usize, n: usize) -> Option<usize> {
    let mut deck = 1;
    for b in 1..n {
        let t = standardize(table, inv, k, n, b).0;
        match t.as_slice().cmp(table) {
            std::cmp::Ordering::Less => return None,
            std::cmp::Ordering::Equal => deck += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    Some(deck)
}

/// Image of `p` under a word, letters applied right to left.
pub(crate) fn trace(table: &[u32], inv: &[u32], n: usize, w: &Word, p: usize) -> Option<usize> {
    let mut p = p;
    for &l in w.0.iter().rev() {
        let i = l.unsigned_abs() as usize - 1;
        let q = if l > 0 { table[i * n + p] } else { inv[i * n + p] };
        if q == UNDEF {
            return None;
        }
        p = q as usize;
    }
    Some(p)
}

#[derive(Clone)]
struct State {
    fwd: Vec<u32>,
    bwd: Vec<u32>,
    count: usize,
    cursor: usize,
}

/// Output of the low-index search.
#[derive(Debug, Clone, Default)]
pub(crate) struct LowIndex {
    /// Canonical tables with their deck-group orders, sorted.
    pub classes: Vec<(Vec<u32>, usize)>,
    /// Number of standard tables, i.e. index-n subgroups.
    pub subgroups: u64,
}

struct Search<'a> {
    k: usize,
    n: usize,
    relators: &'a [Word],
    budget: &'a Budget,
    visited: &'a AtomicUsize,
}

impl Search<'_> {
    fn root(&self) -> State {
        State {
            fwd: vec![UNDEF; self.k * self.n],
            bwd: vec![UNDEF; self.k * self.n],
            count: 1,
            cursor: 0,
        }
    }

    fn relators_ok(&self, s: &State) -> bool {
        self.relators.iter().all(|r| {
            (0..s.count).all(|p| trace(&s.fwd, &s.bwd, self.n, r, p).is_none_or(|q| q == p))
        })
    }

    fn slot(&self, pos: usize) -> (usize, usize, bool) {
        let (p, rest) = (pos / (2 * self.k), pos % (2 * self.k));
        (p, rest / 2, rest % 2 == 1)
    }

    fn is_defined(&self, s: &State, pos: usize) -> bool {
        let (p, i, neg) = self.slot(pos);
        let t = if neg { &s.bwd } else { &s.fwd };
        t[i * self.n + p] != UNDEF
    }

    /// Moves the cursor to the first undefined slot; `None` if the state is
    /// complete (`Some(true)` means a full degree-n table).
    fn advance(&self, s: &mut State) -> Option<bool> {
        while s.cursor < s.count * 2 * self.k && self.is_defined(s, s.cursor) {
            s.cursor += 1;
        }
        if s.cursor == s.count * 2 * self.k {
            Some(s.count == self.n)
        } else {
            None
        }
    }

    fn children(&self, s: &State) -> Vec<State> {
        let (p, i, neg) = self.slot(s.cursor);
        let n = self.n;
        let mut out = vec![];
        let top = if s.count < n { s.count + 1 } else { s.count };
        for q in 0..top {
            let (a, b) = if neg { (&s.fwd, &s.bwd) } else { (&s.bwd, &s.fwd) };
            if q < s.count && a[i * n + q] != UNDEF {
                continue;
            }
            debug_assert_eq!(b[i * n + p], UNDEF);
            let mut c = s.clone();
            if q == s.count {
                c.count += 1;
            }
            if neg {
                c.bwd[i * n + p] = q as u32;
                c.fwd[i * n + q] = p as u32;
            } else {
                c.fwd[i * n + p] = q as u32;
                c.bwd[i * n + q] = p as u32;
            }
            if self.relators_ok(&c) {
                out.push(c);
            }
        }
        out
    }

    fn tick(&self) -> Result<()> {
        let v = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if v > self.budget.max_tables {
            return Err(Error::BudgetExceeded { stage: "subgroup search".into() });
        }
        if v.is_multiple_of(4096) {
            self.budget.check("subgroup search")?;
        }
        Ok(())
    }

    fn finish(&self, s: &State, out: &mut LowIndex) {
        out.subgroups += 1;
        if let Some(deck) = canonical_deck(&s.fwd, &s.bwd, self.k, self.n) {
            out.classes.push((s.fwd.clone(), deck));
        }
    }

    fn dfs(&self, mut s: State, out: &mut LowIndex) -> Result<()> {
        self.tick()?;
        match self.advance(&mut s) {
            Some(true) => self.finish(&s, out),
            Some(false) => {}
            None => {
                for c in self.children(&s) {
                    self.dfs(c, out)?;
                }
            }
        }
        Ok(())
    }
}

/// Index-`n` subgroups of `<g_1..g_k | relators>` up to conjugacy.
pub(crate) fn low_index(k: usize, n: usize, relators: &[Word], ctx: &Context) -> Result<LowIndex> {
    let visited = AtomicUsize::new(0);
    let search = Search { k, n, relators, budget: &ctx.budget, visited: &visited };
    let mut done = LowIndex::default();
    let mut frontier = vec![search.root()];
    let target = if ctx.exec.is_parallel() { 256 } else { 1 };
    while !frontier.is_empty() && frontier.len() < target {
        let mut next = vec![];
        for mut s in frontier {
            search.tick()?;
            match search.advance(&mut s) {
                Some(true) => search.finish(&s, &mut done),
                Some(false) => {}
                None => next.extend(search.children(&s)),
            }
        }
        frontier = next;
    }
    let parts = ctx.exec.try_map(&frontier, |s| {
        let mut out = LowIndex::default();
        search.dfs(s.clone(), &mut out)?;
        Ok(out)
    })?;
    for p in parts {
        done.subgroups += p.subgroups;
        done.classes.extend(p.classes);
    }
    done.classes.sort();
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Exec;

    fn hall(k: u32, nmax: usize) -> Vec<u64> {
        let fact = |m: usize| (1..=m as u64).product::<u64>();
        let mut a = vec![0u64; nmax + 1];
        for n in 1..=nmax {
            let mut v = n as u64 * fact(n).pow(k - 1);
            for i in 1..n {
                v -= fact(n - i).pow(k - 1) * a[i];
            }
            a[n] = v;
        }
        a
    }

    #[test]
    fn free_group_subgroup_counts_follow_hall() {
        let a = hall(2, 4);
        for n in 1..=4 {
            let r = low_index(2, n, &[], &Context::sequential()).unwrap();
            assert_eq!(r.subgroups, a[n]);
            let from_classes: u64 = r.classes.iter().map(|(_, d)| (n / d) as u64).sum();
            assert_eq!(from_classes, a[n]);
        }
        assert_eq!(low_index(2, 2, &[], &Context::sequential()).unwrap().classes.len(), 3);
    }

    #[test]
    fn parallel_frontier_gives_identical_output() {
        let seq = low_index(2, 4, &[], &Context::with_exec(Exec::Sequential)).unwrap();
        let par = low_index(2, 4, &[], &Context::with_exec(Exec::Parallel)).unwrap();
        assert_eq!(seq.classes, par.classes);
        assert_eq!(seq.subgroups, par.subgroups);
    }

    #[test]
    fn relators_prune_to_abelian_counts() {
        let comm = [Word(vec![1, 2, -1, -2])];
        for (n, sigma) in [(1, 1), (2, 3), (3, 4), (4, 7), (6, 12)] {
            let r = low_index(2, n, &comm, &Context::sequential()).unwrap();
            assert_eq!(r.subgroups, sigma);
            assert_eq!(r.classes.len() as u64, sigma);
            assert!(r.classes.iter().all(|(_, d)| *d == n));
        }
    }

    #[test]
    fn standardize_round_trip() {
        // 3-cycle and a transposition on three points
        let t: Vec<u32> = vec![1, 2, 0, 1, 0, 2];
        let inv = inverse_table(&t, 2, 3);
        let (s, lab) = standardize(&t, &inv, 2, 3, 2);
        assert_eq!(lab[2], 0);
        let sinv = inverse_table(&s, 2, 3);
        assert_eq!(standardize(&s, &sinv, 2, 3, 0).0, s);
        let (c, _, ties) = canonical(&t, 2, 3);
        assert_eq!(ties, 1);
        assert!(c <= s);
    }
}
