use serde::Serialize;

use super::{perm, Elem, FiniteGroup, WreathElement};

/// Conjugacy classes of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClassTable {
    pub class_of: Vec<usize>,
    /// Smallest element index of each class, in increasing order.
    pub representatives: Vec<Elem>,
    pub class_sizes: Vec<usize>,
}

impl ConjClassTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Orbits of conjugation by the group generators.
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjClassTable {
    const NONE: usize = usize::MAX;
    let mut class_of = vec![NONE; g.order()];
    let mut representatives = vec![];
    let mut class_sizes = vec![];
    let gens = g.generators();
    let mut stack = vec![];
    for x in g.elements() {
        if class_of[x] != NONE {
            continue;
        }
        let id = representatives.len();
        representatives.push(x);
        class_of[x] = id;
        stack.push(x);
        let mut size = 1;
        while let Some(y) = stack.pop() {
            for &s in gens {
                let z = g.conj(s, y);
                if class_of[z] == NONE {
                    class_of[z] = id;
                    size += 1;
                    stack.push(z);
                }
            }
        }
        class_sizes.push(size);
    }
    ConjClassTable { class_of, representatives, class_sizes }
}

/// `{x : x s = s x for all s in set}` in increasing order.
pub fn centralizer(g: &FiniteGroup, set: &[Elem]) -> Vec<Elem> {
    g.elements()
        .filter(|&x| set.iter().all(|&s| g.commute(x, s)))
        .collect()
}

/// Centralizer restricted to a given element list.
pub(crate) fn centralizer_in(g: &FiniteGroup, within: &[Elem], set: &[Elem]) -> Vec<Elem> {
    within
        .iter()
        .copied()
        .filter(|&x| set.iter().all(|&s| g.commute(x, s)))
        .collect()
}

/// Centralizers of several element sets in one pass over the group.
///
/// Wreath elements are decoded once each and compared coordinatewise, which
/// avoids re-encoding products in groups too large for a table.
pub fn centralizers(g: &FiniteGroup, sets: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]; sets.len()];
    match g.wreath_info() {
        Some(info) if !g.has_table() => {
            let base = &info.base;
            let decoded: Vec<Vec<Decoded>> = sets
                .iter()
                .map(|s| s.iter().map(|&a| Decoded::new(info.decode(a))).collect())
                .collect();
            for x in g.elements() {
                let dx = Decoded::new(info.decode(x));
                for (k, set) in decoded.iter().enumerate() {
                    if set.iter().all(|s| dx.commutes(s, base)) {
                        out[k].push(x);
                    }
                }
            }
        }
        _ => {
            for x in g.elements() {
                for (k, set) in sets.iter().enumerate() {
                    if set.iter().all(|&s| g.commute(x, s)) {
                        out[k].push(x);
                    }
                }
            }
        }
    }
    out
}

struct Decoded {
    w: WreathElement,
    inv_perm: Vec<u32>,
}

impl Decoded {
    fn new(w: WreathElement) -> Self {
        let inv_perm = perm::inverse(&w.perm);
        Decoded { w, inv_perm }
    }

    fn commutes(&self, o: &Decoded, base: &FiniteGroup) -> bool {
        let (a, b) = (&self.w, &o.w);
        (0..a.perm.len()).all(|i| {
            a.perm[b.perm[i] as usize] == b.perm[a.perm[i] as usize]
                && base.mul(a.base[i], b.base[self.inv_perm[i] as usize])
                    == base.mul(b.base[i], a.base[o.inv_perm[i] as usize])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{wreath_product, GroupLimits};

    fn brute_classes(g: &FiniteGroup) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; g.order()];
        let mut out = vec![];
        for x in g.elements() {
            if seen[x] {
                continue;
            }
            let mut cls: Vec<Elem> = g.elements().map(|h| g.conj(h, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                seen[y] = true;
            }
            out.push(cls);
        }
        out
    }

    #[test]
    fn s3_classes_are_1_3_2() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = conjugacy_classes(&s3);
        let mut sizes = t.class_sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        let brute: Vec<usize> = brute_classes(&s3).iter().map(|c| c.len()).collect();
        assert_eq!(t.class_sizes, brute);
        assert_eq!(conjugacy_classes(&FiniteGroup::trivial()).len(), 1);
    }

    #[test]
    fn class_count_of_s3_wr_s2_matches_burnside() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let w = wreath_product(&s3, 2, &GroupLimits::default()).unwrap();
        assert_eq!(w.order(), 72);
        let commuting_pairs: usize = w
            .elements()
            .map(|a| w.elements().filter(|&b| w.commute(a, b)).count())
            .sum();
        assert_eq!(commuting_pairs % 72, 0);
        assert_eq!(conjugacy_classes(&w).len(), commuting_pairs / 72);
        assert_eq!(conjugacy_classes(&w).len(), brute_classes(&w).len());
    }

    #[test]
    fn class_size_times_centralizer_is_order() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let t = conjugacy_classes(&s4);
        assert_eq!(t.class_sizes.iter().sum::<usize>(), 24);
        for x in s4.elements() {
            assert_eq!(t.class_sizes[t.class_of[x]] * centralizer(&s4, &[x]).len(), 24);
        }
    }

    #[test]
    fn bulk_centralizers_match_scan_on_computed_law() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let limits = GroupLimits { table_max: 0, ..GroupLimits::default() };
        let w = wreath_product(&s3, 2, &limits).unwrap();
        assert!(!w.has_table());
        let sets: Vec<Vec<Elem>> = vec![vec![], vec![3], vec![5, 40], vec![71]];
        let bulk = centralizers(&w, &sets);
        for (set, c) in sets.iter().zip(&bulk) {
            assert_eq!(c, &centralizer(&w, set));
        }
    }

    #[test]
    fn centralizer_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let rep = s3.perm_rep().unwrap();
        let find = |p: &[u32]| rep.images.iter().position(|x| x == p).unwrap();
        let c123 = find(&[1, 2, 0]);
        let t12 = find(&[1, 0, 2]);
        assert_eq!(centralizer(&s3, &[c123]).len(), 3);
        assert_eq!(centralizer(&s3, &[s3.identity()]).len(), 6);
        assert_eq!(centralizer(&s3, &[t12, c123]), vec![s3.identity()]);
    }
}
