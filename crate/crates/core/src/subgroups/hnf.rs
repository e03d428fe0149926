//! Finite-index sublattices of `Z^d` in Hermite normal form.
//!
//! Rows are basis vectors; the basis is lower triangular with positive
//! diagonal and `0 <= b[i][j] < b[j][j]` for `j < i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Word;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SublatticeHNF {
    basis: Vec<Vec<i64>>,
}

impl SublatticeHNF {
    /// The full lattice `Z^d`.
    pub fn full(d: usize) -> Self {
        let basis = (0..d)
            .map(|i| (0..d).map(|j| (i == j) as i64).collect())
            .collect();
        SublatticeHNF { basis }
    }

    /// Normal form of the lattice spanned by `rows`, which must have full rank.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Input("lattice rows must be nonempty and of equal length".into()));
        }
        let mut pool: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
        let mut basis = vec![vec![]; d];
        for j in (0..d).rev() {
            loop {
                let mut nz: Vec<usize> = (0..pool.len()).filter(|&r| pool[r][j] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by_key(|&r| pool[r][j].abs());
                let p = nz[0];
                for &r in &nz[1..] {
                    let q = pool[r][j] / pool[p][j];
                    let (pr, rr) = (pool[p].clone(), &mut pool[r]);
                    for (x, y) in rr.iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
            let Some(p) = (0..pool.len()).find(|&r| pool[r][j] != 0) else {
                return Err(Error::Input("lattice rows do not have full rank".into()));
            };
            let mut row = pool.swap_remove(p);
            if row[j] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            basis[j] = row;
        }
        for i in 0..d {
            for j in (0..i).rev() {
                let q = basis[i][j].div_euclid(basis[j][j]);
                if q != 0 {
                    let rj = basis[j].clone();
                    for (x, y) in basis[i].iter_mut().zip(&rj) {
                        *x -= q * y;
                    }
                }
            }
        }
        Ok(SublatticeHNF { basis })
    }

    /// Every index-`n` sublattice of `Z^d`, sorted.
    pub fn enumerate(d: usize, n: u64) -> Vec<Self> {
        let mut out = vec![];
        if d == 0 || n == 0 {
            return out;
        }
        let mut diag = vec![0i64; d];
        fill_diagonals(0, n as i64, &mut diag, &mut |diag| {
            let mut basis: Vec<Vec<i64>> = (0..d)
                .map(|i| (0..d).map(|j| if i == j { diag[i] } else { 0 }).collect())
                .collect();
            fill_offdiag(1, 0, &mut basis, diag, &mut out);
        });
        out.sort();
        out
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.basis[i][i]).collect()
    }

    pub fn index(&self) -> u64 {
        self.diagonal().iter().product::<i64>() as u64
    }

    /// Coefficients of `v` in the basis, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut v = v.to_vec();
        let mut c = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            let a = self.basis[j][j];
            if v[j] % a != 0 {
                return None;
            }
            c[j] = v[j] / a;
            for (x, y) in v.iter_mut().zip(&self.basis[j]) {
                *x -= c[j] * y;
            }
        }
        Some(c)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coords(v).is_some()
    }

    /// The coset representative of `v` in the box `prod [0, diag_j)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for j in (0..self.dim()).rev() {
            let q = v[j].div_euclid(self.basis[j][j]);
            for (x, y) in v.iter_mut().zip(&self.basis[j]) {
                *x -= q * y;
            }
        }
        v
    }

    /// `d · L`.
    pub fn scale(&self, d: i64) -> Self {
        let basis = self.basis.iter().map(|r| r.iter().map(|x| x * d).collect()).collect();
        SublatticeHNF { basis }
    }

    /// The sublattice whose basis in this lattice's coordinates is `inner`.
    pub fn compose(&self, inner: &SublatticeHNF) -> Self {
        let rows: Vec<Vec<i64>> = inner
            .basis
            .iter()
            .map(|r| {
                (0..self.dim())
                    .map(|j| r.iter().zip(&self.basis).map(|(c, b)| c * b[j]).sum())
                    .collect()
            })
            .collect();
        SublatticeHNF::from_rows(&rows).expect("product of full-rank bases has full rank")
    }

    /// All index-`n` sublattices of this lattice, in ambient coordinates.
    pub fn sublattices(&self, n: u64) -> Vec<Self> {
        SublatticeHNF::enumerate(self.dim(), n).iter().map(|s| self.compose(s)).collect()
    }

    /// Basis row `i` as the word `g_1^{b_1} g_2^{b_2} ...`.
    pub fn row_word(&self, i: usize) -> Word {
        let mut w = Word::empty();
        for (j, &b) in self.basis[i].iter().enumerate() {
            w = w.concat(&Word::power(j, b));
        }
        w
    }
}

fn fill_diagonals(i: usize, rest: i64, diag: &mut [i64], f: &mut impl FnMut(&[i64])) {
    if i + 1 == diag.len() {
        diag[i] = rest;
        f(diag);
        return;
    }
    for a in 1..=rest {
        if rest % a == 0 {
            diag[i] = a;
            fill_diagonals(i + 1, rest / a, diag, f);
        }
    }
}

fn fill_offdiag(i: usize, j: usize, basis: &mut Vec<Vec<i64>>, diag: &[i64], out: &mut Vec<SublatticeHNF>) {
    let d = diag.len();
    if i >= d {
        out.push(SublatticeHNF { basis: basis.clone() });
        return;
    }
    if j >= i {
        fill_offdiag(i + 1, 0, basis, diag, out);
        return;
    }
    for b in 0..diag[j] {
        basis[i][j] = b;
        fill_offdiag(i, j + 1, basis, diag, out);
    }
    basis[i][j] = 0;
}

pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|a| n.is_multiple_of(*a)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Distinct lattices spanned by pairs of vectors from a box, kept when of index n.
    fn brute_index_n(n: i64) -> BTreeSet<SublatticeHNF> {
        let mut out = BTreeSet::new();
        let r = n;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for e in -r..=r {
                        if (a * e - b * c).abs() == n {
                            out.insert(SublatticeHNF::from_rows(&[vec![a, b], vec![c, e]]).unwrap());
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn counts_match_sigma1_and_brute_force() {
        assert_eq!(SublatticeHNF::enumerate(2, 1), vec![SublatticeHNF::full(2)]);
        assert_eq!(SublatticeHNF::enumerate(2, 4).len(), 7);
        assert_eq!(SublatticeHNF::enumerate(2, 6).len(), 12);
        for n in 1..=6 {
            let e: BTreeSet<_> = SublatticeHNF::enumerate(2, n as u64).into_iter().collect();
            assert_eq!(e, brute_index_n(n), "n = {n}");
        }
    }

    #[test]
    fn normalization_is_unique() {
        let l = SublatticeHNF::from_rows(&[vec![2, 0], vec![1, 3]]).unwrap();
        let m = SublatticeHNF::from_rows(&[vec![-3, -3], vec![1, 3], vec![4, 6]]).unwrap();
        assert_eq!(l, m);
        assert_eq!(l.basis(), &[vec![2, 0], vec![1, 3]]);
        assert_eq!(l.index(), 6);
        assert!(SublatticeHNF::from_rows(&[vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn membership_and_reduction() {
        let l = SublatticeHNF::from_rows(&[vec![2, 0], vec![1, 3]]).unwrap();
        assert!(l.contains(&[3, 3]));
        assert!(!l.contains(&[1, 0]));
        let reps: BTreeSet<Vec<i64>> = (-5..5).flat_map(|x| (-5..5).map(move |y| vec![x, y])).map(|v| l.reduce(&v)).collect();
        assert_eq!(reps.len(), 6);
        assert!(reps.iter().all(|v| v[0] >= 0 && v[0] < 2 && v[1] >= 0 && v[1] < 3));
    }

    #[test]
    fn row_words() {
        let l = SublatticeHNF::from_rows(&[vec![2, 0], vec![1, 3]]).unwrap();
        assert_eq!(l.row_word(0), Word(vec![1, 1]));
        assert_eq!(l.row_word(1), Word(vec![1, 2, 2, 2]));
    }

    #[test]
    fn sublattices_of_sublattices_have_product_index() {
        for l in SublatticeHNF::enumerate(2, 4) {
            let subs = l.sublattices(3);
            assert_eq!(subs.len(), 4);
            assert!(subs.iter().all(|s| s.index() == 12));
        }
        assert_eq!(SublatticeHNF::full(2).scale(2).basis(), &[vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn dimension_three_counts() {
        // number of index-n sublattices of Z^3 is sum over d1 d2 d3 = n of d1^2 d2
        for n in 1..=8u64 {
            let mut expect = 0;
            for a in 1..=n {
                for b in 1..=n {
                    if n % (a * b) == 0 {
                        expect += a * a * b;
                    }
                }
            }
            assert_eq!(SublatticeHNF::enumerate(3, n).len() as u64, expect);
        }
    }
}
