//! Hom(Γ, G) and Hom(H, G) with their conjugation classes, stabilizers and
//! the `N_Γ(H) × G` orbit structure.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{centralizer, classes::centralizer_in, conjugacy_classes, Elem, FiniteGroup};
use crate::par::{Budget, Context};
use crate::presentation::{evaluate_word, GammaSpec, Word};
use crate::subgroups::{deck_group, schreier, DeckGroup, Schreier, SubgroupClass};

/// A homomorphism Γ → G by its generator images.
#[derive(Debug, Clone)]
pub struct Hom {
    pub gamma: GammaSpec,
    pub target: FiniteGroup,
    pub images: Vec<Elem>,
}

enum HomIndex {
    /// Rank one with every element a hom: the hom is its own index.
    Direct,
    Map(HashMap<Vec<Elem>, usize>),
}

/// All homomorphisms Γ → G, lexicographic in the images.
pub struct HomSet {
    pub gamma: GammaSpec,
    pub target: FiniteGroup,
    rank: usize,
    data: Vec<Elem>,
    index: HomIndex,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.data.len() / self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize) -> &[Elem] {
        &self.data[i * self.rank..(i + 1) * self.rank]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks(self.rank)
    }

    pub fn index_of(&self, images: &[Elem]) -> Option<usize> {
        match &self.index {
            HomIndex::Direct => images.first().copied().filter(|&x| x < self.len()),
            HomIndex::Map(m) => m.get(images).copied(),
        }
    }

    pub fn to_hom(&self, i: usize) -> Hom {
        Hom {
            gamma: self.gamma.clone(),
            target: self.target.clone(),
            images: self.get(i).to_vec(),
        }
    }

    fn from_data(gamma: GammaSpec, target: FiniteGroup, data: Vec<Elem>) -> Self {
        let rank = gamma.rank();
        let direct = rank == 1 && data.len() == target.order() && !matches!(gamma, GammaSpec::Presented { .. });
        let index = if direct {
            HomIndex::Direct
        } else {
            HomIndex::Map(data.chunks(rank).enumerate().map(|(i, c)| (c.to_vec(), i)).collect())
        };
        HomSet { gamma, target, rank, data, index }
    }
}

/// Calls `f` on every homomorphism with all images in `subset`, a subgroup
/// given as a sorted element list, in lexicographic order.
pub fn for_each_hom_in(
    gamma: &GammaSpec,
    g: &FiniteGroup,
    subset: &[Elem],
    budget: &Budget,
    f: &mut dyn FnMut(&[Elem]),
) -> Result<()> {
    let k = gamma.rank();
    let mut cur = Vec::with_capacity(k);
    match gamma {
        GammaSpec::FreeAbelian { .. } => commuting_tuples(g, subset, k, &mut cur, budget, f),
        GammaSpec::Free { .. } => {
            let total = (subset.len() as u128).saturating_pow(k as u32);
            budget.check_count("hom enumeration", usize::try_from(total).unwrap_or(usize::MAX), budget.max_homs)?;
            all_tuples(subset, k, &mut cur, budget, &mut |t| {
                f(t);
                true
            })
        }
        GammaSpec::Presented { relators, .. } => {
            let total = (subset.len() as u128).saturating_pow(k as u32);
            budget.check_count("hom enumeration", usize::try_from(total).unwrap_or(usize::MAX), budget.max_tables)?;
            // relators grouped by the last generator they mention, checked as soon as it is set
            let mut by_level: Vec<Vec<&Word>> = vec![vec![]; k + 1];
            for r in relators {
                by_level[r.max_index()].push(r);
            }
            presented_tuples(g, subset, k, &by_level, &mut cur, budget, f)
        }
    }
}

fn tick(budget: &Budget, count: &mut usize) -> Result<()> {
    *count += 1;
    if (*count).is_multiple_of(65536) {
        budget.check("hom enumeration")?;
    }
    Ok(())
}

fn all_tuples(
    subset: &[Elem],
    k: usize,
    cur: &mut Vec<Elem>,
    budget: &Budget,
    f: &mut dyn FnMut(&[Elem]) -> bool,
) -> Result<()> {
    let mut count = 0usize;
    fn go(
        subset: &[Elem],
        k: usize,
        cur: &mut Vec<Elem>,
        budget: &Budget,
        count: &mut usize,
        f: &mut dyn FnMut(&[Elem]) -> bool,
    ) -> Result<()> {
        if cur.len() == k {
            tick(budget, count)?;
            f(cur);
            return Ok(());
        }
        for &x in subset {
            cur.push(x);
            go(subset, k, cur, budget, count, f)?;
            cur.pop();
        }
        Ok(())
    }
    go(subset, k, cur, budget, &mut count, f)
}

fn commuting_tuples(
    g: &FiniteGroup,
    cands: &[Elem],
    k: usize,
    cur: &mut Vec<Elem>,
    budget: &Budget,
    f: &mut dyn FnMut(&[Elem]),
) -> Result<()> {
    if cur.len() == k {
        f(cur);
        return Ok(());
    }
    budget.check("hom enumeration")?;
    let last = cur.len() + 1 == k;
    for &x in cands {
        cur.push(x);
        if last {
            f(cur);
        } else {
            let next = centralizer_in(g, cands, &[x]);
            commuting_tuples(g, &next, k, cur, budget, f)?;
        }
        cur.pop();
    }
    Ok(())
}

fn presented_tuples(
    g: &FiniteGroup,
    subset: &[Elem],
    k: usize,
    by_level: &[Vec<&Word>],
    cur: &mut Vec<Elem>,
    budget: &Budget,
    f: &mut dyn FnMut(&[Elem]),
) -> Result<()> {
    let level = cur.len();
    let ok = by_level[level]
        .iter()
        .all(|r| evaluate_word(r, cur, g).map(|x| x == g.identity()).unwrap_or(false));
    if !ok {
        return Ok(());
    }
    if level == k {
        f(cur);
        return Ok(());
    }
    if level == 0 {
        budget.check("hom enumeration")?;
    }
    for &x in subset {
        cur.push(x);
        presented_tuples(g, subset, k, by_level, cur, budget, f)?;
        cur.pop();
    }
    Ok(())
}

/// Every homomorphism Γ → G.
pub fn enumerate_homs(gamma: &GammaSpec, g: &FiniteGroup, ctx: &Context) -> Result<HomSet> {
    gamma.validate()?;
    let all: Vec<Elem> = g.elements().collect();
    let budget = ctx.budget;
    let chunks = ctx.exec.try_map(&all, |&x| {
        let mut out = vec![];
        // fix the first image and enumerate the rest
        let mut rest = |t: &[Elem]| {
            if t[0] == x {
                out.extend_from_slice(t);
            }
        };
        match gamma {
            GammaSpec::FreeAbelian { rank } if *rank > 1 => {
                let c = centralizer(g, &[x]);
                let mut cur = vec![x];
                commuting_tuples(g, &c, *rank, &mut cur, &budget, &mut rest)?;
            }
            _ if gamma.rank() == 1 => {
                for_each_hom_in(gamma, g, &[x], &budget, &mut rest)?;
            }
            GammaSpec::Free { rank } => {
                let total = (all.len() as u128).saturating_pow(*rank as u32);
                budget.check_count("hom enumeration", usize::try_from(total).unwrap_or(usize::MAX), budget.max_homs)?;
                let mut cur = vec![x];
                all_tuples(&all, *rank, &mut cur, &budget, &mut |t| {
                    rest(t);
                    true
                })?;
            }
            _ => {
                let mut cur = vec![x];
                let k = gamma.rank();
                let mut by_level: Vec<Vec<&Word>> = vec![vec![]; k + 1];
                let rels = gamma.relators();
                for r in &rels {
                    by_level[r.max_index()].push(r);
                }
                presented_tuples(g, &all, k, &by_level, &mut cur, &budget, &mut rest)?;
            }
        }
        Ok(out)
    })?;
    let data = chunks.concat();
    budget.check_count("hom enumeration", data.len() / gamma.rank(), budget.max_homs)?;
    Ok(HomSet::from_data(gamma.clone(), g.clone(), data))
}

/// Conjugation classes of homomorphisms.
#[derive(Debug, Clone, Serialize)]
pub struct HomClasses {
    /// Class of each hom in the set.
    pub class_of: Vec<u32>,
    /// Index of the first hom of each class.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl HomClasses {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Orbits of `θ ↦ g θ g^-1`; `|class| · |C_G(θ)| = |G|`.
pub fn hom_classes(homs: &HomSet) -> HomClasses {
    let g = &homs.target;
    if matches!(homs.index, HomIndex::Direct) {
        let t = conjugacy_classes(g);
        return HomClasses {
            class_of: t.class_of.iter().map(|&c| c as u32).collect(),
            representatives: t.representatives,
            sizes: t.class_sizes,
        };
    }
    let moves: Vec<Move<'_>> = g
        .generators()
        .iter()
        .map(|&s| Box::new(move |t: &[Elem]| t.iter().map(|&x| g.conj(s, x)).collect()) as Move<'_>)
        .collect();
    orbits(homs, &moves)
}

/// Orbits of the group generated by `moves` on a hom set, seeded in index order.
/// A map on homomorphism tuples generating an orbit relation.
type Move<'a> = Box<dyn Fn(&[Elem]) -> Vec<Elem> + 'a>;

fn orbits(homs: &HomSet, moves: &[Move<'_>]) -> HomClasses {
    const NONE: u32 = u32::MAX;
    let mut class_of = vec![NONE; homs.len()];
    let mut representatives = vec![];
    let mut sizes = vec![];
    let mut stack = vec![];
    for i in 0..homs.len() {
        if class_of[i] != NONE {
            continue;
        }
        let id = representatives.len() as u32;
        representatives.push(i);
        class_of[i] = id;
        stack.push(i);
        let mut size = 1;
        while let Some(j) = stack.pop() {
            for m in moves {
                let img = m(homs.get(j));
                let t = homs.index_of(&img).expect("hom set is closed under the moves");
                if class_of[t] == NONE {
                    class_of[t] = id;
                    size += 1;
                    stack.push(t);
                }
            }
        }
        sizes.push(size);
    }
    HomClasses { class_of, representatives, sizes }
}

/// One `(N_Γ(H) × G)`-orbit of `Hom(H, G)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoClass {
    /// Images of the Schreier generators.
    pub rho: Vec<Elem>,
    pub orbit_size: usize,
    pub cg_rho_order: usize,
    /// `|N_Γ^ρ(H) / H|`: deck elements fixing the G-class of ρ.
    pub n_rho_index: usize,
    pub aut_order: usize,
}

pub struct RhoClassTable {
    pub subgroup: SubgroupClass,
    pub schreier: Schreier,
    pub deck: DeckGroup,
    pub homs: HomSet,
    /// `(N × G)`-orbit of every hom.
    pub class_of: Vec<u32>,
    /// G-orbit of every hom.
    pub gclass_of: Vec<u32>,
    pub classes: Vec<RhoClass>,
    /// `deck_words[a][s]`: `u_a^-1 s u_a` in the Schreier generators.
    deck_words: Vec<Vec<Word>>,
}

impl RhoClassTable {
    /// `ρ^{u_a^-1}` for the deck element `a`.
    pub fn deck_image(&self, a: usize, rho: &[Elem]) -> Vec<Elem> {
        let g = &self.homs.target;
        self.deck_words[a]
            .iter()
            .map(|w| evaluate_word(w, rho, g).expect("rewritten word is within rank"))
            .collect()
    }

    pub fn class_of_rho(&self, rho: &[Elem]) -> Option<usize> {
        self.homs.index_of(rho).map(|i| self.class_of[i] as usize)
    }

    /// Image of the isotropy `T_ρ` in G: all `g` with `g ρ^{u⁻¹} g⁻¹ = ρ`
    /// for some `u` normalizing H. With `u = u_a h` this is the union over
    /// deck elements of `S_a · ρ(H)`, `S_a = {g : g ρ^{u_a⁻¹} g⁻¹ = ρ}`.
    pub fn pi_g_of_t_rho(&self, rho: &[Elem]) -> Vec<Elem> {
        let g = &self.homs.target;
        let image = g.closure(rho);
        let mut out = vec![];
        for a in 0..self.deck.order() {
            let r = self.deck_image(a, rho);
            for x in g.elements().filter(|&x| r.iter().zip(rho).all(|(&y, &z)| g.conj(x, y) == z)) {
                out.extend(image.iter().map(|&y| g.mul(x, y)));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// `Hom(H, G) / (N_Γ(H) × G)` with stabilizer data per class.
pub fn enumerate_rho_classes(h: &SubgroupClass, g: &FiniteGroup, ctx: &Context) -> Result<RhoClassTable> {
    let domain = h.hom_domain()?;
    let s = Schreier::new(h)?;
    let deck = deck_group(h);
    let deck_words = deck
        .words
        .iter()
        .map(|u| {
            s.generators
                .iter()
                .map(|gen| schreier::conjugate_with(&s, h, u, gen))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let homs = enumerate_homs(&domain, g, ctx)?;

    let gclasses = hom_classes(&homs);
    let mut moves: Vec<Move<'_>> = vec![];
    for &x in g.generators() {
        moves.push(Box::new(move |t: &[Elem]| t.iter().map(|&y| g.conj(x, y)).collect()));
    }
    for words in deck_words.iter().skip(1) {
        moves.push(Box::new(move |t: &[Elem]| {
            words.iter().map(|w| evaluate_word(w, t, g).expect("rewritten word is within rank")).collect()
        }));
    }
    let orbit = orbits(&homs, &moves);
    drop(moves);

    let mut table = RhoClassTable {
        subgroup: h.clone(),
        schreier: s,
        deck,
        class_of: orbit.class_of.clone(),
        gclass_of: gclasses.class_of,
        classes: vec![],
        deck_words,
        homs,
    };
    let mut classes = Vec::with_capacity(orbit.len());
    for (&rep, &orbit_size) in orbit.representatives.iter().zip(&orbit.sizes) {
        let rho = table.homs.get(rep).to_vec();
        let cg_rho_order = centralizer(g, &rho).len();
        let own = table.gclass_of[rep];
        let n_rho_index = (0..table.deck.order())
            .filter(|&a| {
                let r = table.deck_image(a, &rho);
                table.homs.index_of(&r).map(|i| table.gclass_of[i]) == Some(own)
            })
            .count();
        let aut_order = cg_rho_order * n_rho_index;
        if orbit_size * aut_order != g.order() * table.deck.order() {
            return Err(Error::Internal(format!(
                "orbit-stabilizer mismatch: orbit {orbit_size}, aut {aut_order}, |G| {}, deck {}",
                g.order(),
                table.deck.order()
            )));
        }
        classes.push(RhoClass { rho, orbit_size, cg_rho_order, n_rho_index, aut_order });
    }
    table.classes = classes;
    Ok(table)
}

/// The image of `T_ρ` in G.
pub fn pi_g_of_t_rho(h: &SubgroupClass, rho: &[Elem], g: &FiniteGroup, ctx: &Context) -> Result<Vec<Elem>> {
    Ok(enumerate_rho_classes(h, g, ctx)?.pi_g_of_t_rho(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::conjugacy_classes;
    use crate::par::Exec;
    use crate::subgroups::{enumerate_subgroup_classes, SublatticeHNF};

    fn ctx() -> Context {
        Context::sequential()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3).unwrap()
    }

    #[test]
    fn hom_counts() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(enumerate_homs(&GammaSpec::free(2), &z2, &ctx()).unwrap().len(), 4);
        let commuting = s3().elements().map(|a| centralizer(&s3(), &[a]).len()).sum::<usize>();
        assert_eq!(commuting, 18);
        assert_eq!(enumerate_homs(&GammaSpec::free_abelian(2), &s3(), &ctx()).unwrap().len(), 18);
        let sq = GammaSpec::presented(1, vec![Word(vec![1, 1])]).unwrap();
        assert_eq!(enumerate_homs(&sq, &s3(), &ctx()).unwrap().len(), 4);
        for k in 1..=3 {
            assert_eq!(enumerate_homs(&GammaSpec::free(k), &s3(), &ctx()).unwrap().len(), 6usize.pow(k as u32));
        }
    }

    #[test]
    fn enumeration_matches_filter_and_is_order_stable() {
        let g = &FiniteGroup::symmetric(4).unwrap();
        for gamma in [GammaSpec::free_abelian(3), GammaSpec::free_abelian(2).as_presented()] {
            let seq = enumerate_homs(&gamma, g, &Context::with_exec(Exec::Sequential)).unwrap();
            let par = enumerate_homs(&gamma, g, &Context::with_exec(Exec::Parallel)).unwrap();
            let brute: Vec<Vec<Elem>> = if gamma.rank() == 3 {
                g.elements()
                    .flat_map(|a| g.elements().flat_map(move |b| g.elements().map(move |c| vec![a, b, c])))
                    .filter(|t| crate::presentation::is_hom(t, &gamma, g))
                    .collect()
            } else {
                g.elements()
                    .flat_map(|a| g.elements().map(move |b| vec![a, b]))
                    .filter(|t| crate::presentation::is_hom(t, &gamma, g))
                    .collect()
            };
            assert_eq!(seq.iter().map(<[Elem]>::to_vec).collect::<Vec<_>>(), brute);
            assert_eq!(par.iter().collect::<Vec<_>>(), seq.iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn class_counts() {
        let g = s3();
        let z = enumerate_homs(&GammaSpec::free_abelian(1), &g, &ctx()).unwrap();
        assert_eq!(hom_classes(&z).len(), conjugacy_classes(&g).len());
        let z2 = enumerate_homs(&GammaSpec::free_abelian(2), &g, &ctx()).unwrap();
        assert_eq!(hom_classes(&z2).len(), 8);
        let f2 = enumerate_homs(&GammaSpec::free(2), &g, &ctx()).unwrap();
        let c = hom_classes(&f2);
        assert_eq!(c.len(), 11);
        for (&rep, &size) in c.representatives.iter().zip(&c.sizes) {
            assert_eq!(size * centralizer(&g, f2.get(rep)).len(), 6);
        }
    }

    /// Orbits recomputed from scratch: all pairs (deck element, g) applied.
    fn brute_orbits(t: &RhoClassTable, g: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; t.homs.len()];
        let mut out = vec![];
        for i in 0..t.homs.len() {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<usize> = vec![];
            for a in 0..t.deck.order() {
                let r = t.deck_image(a, t.homs.get(i));
                for x in g.elements() {
                    let c: Vec<Elem> = r.iter().map(|&y| g.conj(x, y)).collect();
                    orbit.push(t.homs.index_of(&c).unwrap());
                }
            }
            orbit.sort_unstable();
            orbit.dedup();
            let mut frontier = orbit.clone();
            while let Some(j) = frontier.pop() {
                for a in 0..t.deck.order() {
                    let r = t.deck_image(a, t.homs.get(j));
                    for x in g.elements() {
                        let c: Vec<Elem> = r.iter().map(|&y| g.conj(x, y)).collect();
                        let k = t.homs.index_of(&c).unwrap();
                        if let Err(pos) = orbit.binary_search(&k) {
                            orbit.insert(pos, k);
                            frontier.push(k);
                        }
                    }
                }
            }
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit);
        }
        out
    }

    #[test]
    fn rho_classes_match_exhaustive_orbits() {
        for g in [FiniteGroup::cyclic(2).unwrap(), s3()] {
            for h in enumerate_subgroup_classes(&GammaSpec::free(2), 2, &ctx())
                .unwrap()
                .into_iter()
                .chain(enumerate_subgroup_classes(&GammaSpec::free(2), 3, &ctx()).unwrap())
            {
                let t = enumerate_rho_classes(&h, &g, &ctx()).unwrap();
                let brute = brute_orbits(&t, &g);
                assert_eq!(brute.len(), t.classes.len());
                let total: usize = t.classes.iter().map(|c| c.orbit_size).sum();
                assert_eq!(total, g.order().pow(t.schreier.rank() as u32));
                for c in &t.classes {
                    assert_eq!(c.aut_order, c.cg_rho_order * c.n_rho_index);
                    let i = t.homs.index_of(&c.rho).unwrap();
                    let orbit = brute.iter().find(|o| o.contains(&i)).unwrap();
                    assert_eq!(orbit.len(), c.orbit_size);
                }
            }
        }
    }

    #[test]
    fn abelian_gamma_has_trivial_deck_action() {
        let g = s3();
        for l in SublatticeHNF::enumerate(2, 4) {
            let h = SubgroupClass::from_lattice(l).unwrap();
            let t = enumerate_rho_classes(&h, &g, &ctx()).unwrap();
            assert_eq!(t.classes.len(), 8);
            for i in 0..t.homs.len() {
                for a in 0..t.deck.order() {
                    assert_eq!(t.deck_image(a, t.homs.get(i)), t.homs.get(i));
                }
            }
            for c in &t.classes {
                assert_eq!(c.aut_order, c.cg_rho_order * 4);
                assert_eq!(t.pi_g_of_t_rho(&c.rho), centralizer(&g, &c.rho));
            }
        }
        let z = &enumerate_subgroup_classes(&GammaSpec::free(1), 3, &ctx()).unwrap()[0];
        assert_eq!(enumerate_rho_classes(z, &g, &ctx()).unwrap().classes.len(), 3);
    }

    #[test]
    fn pi_g_examples() {
        let g = s3();
        for h in enumerate_subgroup_classes(&GammaSpec::free(2), 2, &ctx()).unwrap() {
            let t = enumerate_rho_classes(&h, &g, &ctx()).unwrap();
            let trivial = vec![g.identity(); t.schreier.rank()];
            assert_eq!(t.pi_g_of_t_rho(&trivial), g.elements().collect::<Vec<_>>());
            // normalizing words of length at most 4, acting through direct rewriting
            let mut words = vec![Word::empty()];
            for _ in 0..4 {
                let mut next = vec![];
                for w in &words {
                    for l in [1, -1, 2, -2] {
                        next.push(Word(vec![l]).concat(w).free_reduce());
                    }
                }
                words.extend(next);
                words.sort();
                words.dedup();
            }
            let deck = h.deck_points();
            let normalizers: Vec<&Word> = words.iter().filter(|u| deck.contains(&h.act_word(u, 0))).collect();
            for c in &t.classes {
                let p = t.pi_g_of_t_rho(&c.rho);
                let mut brute = vec![];
                for u in &normalizers {
                    let moved: Vec<Elem> = t
                        .schreier
                        .generators
                        .iter()
                        .map(|s| {
                            let w = crate::subgroups::conjugate_into_generators(&h, u, s).unwrap();
                            evaluate_word(&w, &c.rho, &g).unwrap()
                        })
                        .collect();
                    brute.extend(g.elements().filter(|&x| moved.iter().zip(&c.rho).all(|(&y, &z)| g.conj(x, y) == z)));
                }
                brute.sort_unstable();
                brute.dedup();
                assert_eq!(p, brute);
                assert_eq!(g.closure(&p), p);
                assert!(centralizer(&g, &c.rho).iter().all(|x| p.contains(x)));
            }
        }
    }

    #[test]
    fn presented_subgroup_homs_are_rejected() {
        let gamma = GammaSpec::free_abelian(2).as_presented();
        let h = &enumerate_subgroup_classes(&gamma, 2, &ctx()).unwrap()[0];
        assert!(matches!(enumerate_rho_classes(h, &s3(), &ctx()), Err(Error::Unsupported(_))));
    }
}
