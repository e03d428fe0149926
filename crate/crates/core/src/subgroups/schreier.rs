//! Spanning trees of coset graphs, Schreier generators and rewriting.

use super::coset::UNDEF;
use super::SubgroupClass;
use crate::error::{Error, Result};
use crate::presentation::{GammaSpec, Word};

/// Words `t_p` with `t_p · 0 = p`, from the breadth-first tree of the table.
pub fn tree_words(h: &SubgroupClass) -> Vec<Word> {
    spanning_tree(h).0
}

/// Tree words plus a flag per positive edge `(p, i)` (at `i * n + p`)
/// marking the edges of the tree.
fn spanning_tree(h: &SubgroupClass) -> (Vec<Word>, Vec<bool>) {
    let (n, k) = (h.degree, h.action.len());
    let mut words: Vec<Option<Word>> = vec![None; n];
    let mut on_tree = vec![false; k * n];
    words[0] = Some(Word::empty());
    let mut queue = vec![0usize];
    let mut idx = 0;
    while idx < queue.len() {
        let p = queue[idx];
        idx += 1;
        for i in 0..k {
            for neg in [false, true] {
                let q = if neg { h.preimage(i, p) } else { h.act(i, p) };
                if words[q].is_none() {
                    let w = Word::letter(i, neg).concat(words[p].as_ref().unwrap());
                    words[q] = Some(w);
                    on_tree[i * n + if neg { q } else { p }] = true;
                    queue.push(q);
                }
            }
        }
    }
    let words = words.into_iter().map(|w| w.expect("coset table is transitive")).collect();
    (words, on_tree)
}

/// A Schreier generating set together with what is needed to rewrite.
#[derive(Debug, Clone)]
pub struct Schreier {
    pub tree: Vec<Word>,
    /// Generators as words in the generators of Γ.
    pub generators: Vec<Word>,
    /// For free Γ: generator index of each non-tree positive edge `(p, i)`
    /// at `i * n + p`, `UNDEF` on tree edges.
    edge: Vec<u32>,
}

impl Schreier {
    pub fn new(h: &SubgroupClass) -> Result<Self> {
        let (tree, on_tree) = spanning_tree(h);
        match &h.gamma {
            GammaSpec::Free { .. } => {
                let (n, k) = (h.degree, h.action.len());
                let mut edge = vec![UNDEF; k * n];
                let mut generators = vec![];
                for p in 0..n {
                    for i in 0..k {
                        let q = h.act(i, p);
                        if on_tree[i * n + p] {
                            continue;
                        }
                        edge[i * n + p] = generators.len() as u32;
                        let s = tree[q].inverse().concat(&Word::letter(i, false)).concat(&tree[p]);
                        generators.push(s.free_reduce());
                    }
                }
                Ok(Schreier { tree, generators, edge })
            }
            GammaSpec::FreeAbelian { rank } => {
                let l = h.lattice.as_ref().ok_or_else(|| Error::Internal("free abelian class without lattice".into()))?;
                let generators = (0..*rank).map(|i| l.row_word(i)).collect();
                Ok(Schreier { tree, generators, edge: vec![] })
            }
            GammaSpec::Presented { .. } => Err(Error::Unsupported(
                "Schreier generators need a free or free abelian Γ".into(),
            )),
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Expresses `w`, an element of H given as a word in Γ, in the Schreier
    /// generators (letters `±(j+1)` for generator `j`).
    pub fn rewrite(&self, h: &SubgroupClass, w: &Word) -> Result<Word> {
        if !h.contains(w) {
            return Err(Error::NotInSubgroup);
        }
        if let Some(l) = &h.lattice {
            let c = l
                .coords(&w.exponent_vector(h.action.len()))
                .ok_or(Error::NotInSubgroup)?;
            let mut out = Word::empty();
            for (j, &e) in c.iter().enumerate() {
                out = out.concat(&Word::power(j, e));
            }
            return Ok(out);
        }
        let n = h.degree;
        let mut factors = vec![];
        let mut p = 0usize;
        for &l in w.0.iter().rev() {
            let i = l.unsigned_abs() as usize - 1;
            if l > 0 {
                let e = self.edge[i * n + p];
                if e != UNDEF {
                    factors.push(e as i32 + 1);
                }
                p = h.act(i, p);
            } else {
                let q = h.preimage(i, p);
                let e = self.edge[i * n + q];
                if e != UNDEF {
                    factors.push(-(e as i32 + 1));
                }
                p = q;
            }
        }
        factors.reverse();
        Ok(Word(factors).free_reduce())
    }
}

pub fn schreier_generators(h: &SubgroupClass) -> Result<Vec<Word>> {
    Ok(Schreier::new(h)?.generators)
}

/// `u^-1 h u` in the Schreier generators, for `u` normalizing H and `h` in H.
pub fn conjugate_into_generators(h: &SubgroupClass, u: &Word, h_word: &Word) -> Result<Word> {
    let s = Schreier::new(h)?;
    conjugate_with(&s, h, u, h_word)
}

pub(crate) fn conjugate_with(s: &Schreier, h: &SubgroupClass, u: &Word, h_word: &Word) -> Result<Word> {
    let j = h.act_word(u, 0);
    if !h.deck_points().contains(&j) {
        return Err(Error::NotNormalizing);
    }
    if !h.contains(h_word) {
        return Err(Error::NotInSubgroup);
    }
    s.rewrite(h, &u.inverse().concat(h_word).concat(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::par::Context;
    use crate::presentation::evaluate_word;
    use crate::subgroups::enumerate_subgroup_classes;
    use crate::subgroups::hnf::SublatticeHNF;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nielsen_schreier_rank() {
        for n in 1..=4 {
            for h in enumerate_subgroup_classes(&GammaSpec::free(2), n, &Context::sequential()).unwrap() {
                let s = Schreier::new(&h).unwrap();
                assert_eq!(s.rank(), 1 + n);
                assert!(s.generators.iter().all(|g| h.contains(g)));
                for (p, t) in s.tree.iter().enumerate() {
                    assert_eq!(h.act_word(t, 0), p);
                }
            }
        }
        let z = enumerate_subgroup_classes(&GammaSpec::free(1), 5, &Context::sequential()).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(schreier_generators(&z[0]).unwrap(), vec![Word(vec![1; 5])]);
    }

    #[test]
    fn lattice_rows_as_generators() {
        let l = SublatticeHNF::from_rows(&[vec![2, 0], vec![1, 3]]).unwrap();
        let h = SubgroupClass::from_lattice(l).unwrap();
        let g = schreier_generators(&h).unwrap();
        assert_eq!(g, vec![Word(vec![1, 1]), Word(vec![1, 2, 2, 2])]);
        let w = Word(vec![2, 1, 2, -1, 2, 1, 1, 1]);
        assert_eq!(conjugate_into_generators(&h, &Word(vec![1]), &w).unwrap(), Schreier::new(&h).unwrap().rewrite(&h, &w).unwrap());
    }

    #[test]
    fn presented_kind_is_unsupported() {
        let g = GammaSpec::free_abelian(2).as_presented();
        let h = &enumerate_subgroup_classes(&g, 2, &Context::sequential()).unwrap()[0];
        assert!(matches!(Schreier::new(h), Err(Error::Unsupported(_))));
    }

    /// Both sides of the rewriting evaluated under random maps to S3.
    #[test]
    fn conjugation_rewrite_agrees_under_evaluation() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for h in enumerate_subgroup_classes(&GammaSpec::free(2), 2, &Context::sequential()).unwrap() {
            let s = Schreier::new(&h).unwrap();
            let u = Word(vec![1]);
            for gen in &s.generators {
                let r = conjugate_with(&s, &h, &u, gen).unwrap();
                for _ in 0..50 {
                    let imgs = [rng.gen_range(0..6), rng.gen_range(0..6)];
                    let lhs = evaluate_word(&u.inverse().concat(gen).concat(&u), &imgs, &s3).unwrap();
                    let sub_imgs: Vec<usize> = s.generators.iter().map(|g| evaluate_word(g, &imgs, &s3).unwrap()).collect();
                    assert_eq!(evaluate_word(&r, &sub_imgs, &s3).unwrap(), lhs);
                }
            }
        }
    }

    #[test]
    fn non_normalizing_word_is_rejected() {
        let classes = enumerate_subgroup_classes(&GammaSpec::free(2), 3, &Context::sequential()).unwrap();
        let h = classes.iter().find(|h| h.deck_points().len() == 1).unwrap();
        let u = (1..=2)
            .flat_map(|i| [Word(vec![i]), Word(vec![-i])])
            .find(|u| h.act_word(u, 0) != 0)
            .unwrap();
        assert_eq!(conjugate_into_generators(h, &u, &Word::empty()), Err(Error::NotNormalizing));
    }
}
