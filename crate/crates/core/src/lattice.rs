//! Hecke operators on sublattices of `Z^d` and their geometric counterparts
//! evaluated on the functor `L ↦ C_L(M/G)` of a torus covering.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::pair_orbits;
use crate::group::FiniteGroup;
use crate::gset::FinGSet;
use crate::homspace::enumerate_rho_classes;
use crate::par::Context;
use crate::subgroups::{SubgroupClass, SublatticeHNF};

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A formal nonnegative combination of sublattices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LatticeSum(pub BTreeMap<SublatticeHNF, u64>);

impl LatticeSum {
    pub fn single(l: SublatticeHNF) -> Self {
        LatticeSum(BTreeMap::from([(l, 1)]))
    }

    /// The ambient lattice `Z^d`.
    pub fn ambient(d: usize) -> Self {
        LatticeSum::single(SublatticeHNF::full(d))
    }

    /// Total multiplicity.
    pub fn count(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn add_scaled(&mut self, other: &LatticeSum, c: u64) {
        for (l, &k) in &other.0 {
            *self.0.entry(l.clone()).or_default() += c * k;
        }
    }

    /// Replaces every lattice by the sum of its index-n sublattices.
    pub fn hecke_t(&self, n: u64) -> LatticeSum {
        let mut out = LatticeSum::default();
        for (l, &k) in &self.0 {
            for s in l.sublattices(n) {
                *out.0.entry(s).or_default() += k;
            }
        }
        out
    }

    /// `L ↦ dL`.
    pub fn scale_r(&self, d: u64) -> LatticeSum {
        LatticeSum(self.0.iter().map(|(l, &k)| (l.scale(d as i64), k)).collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeHeckeReport {
    pub m: u64,
    pub n: u64,
    pub lhs_count: u64,
    pub rhs_count: u64,
    pub distinct_lattices: usize,
    /// Multiset equality, not just equal counts.
    pub pass: bool,
}

/// `T(m) T(n) Z^2 = sum_{d | (m, n)} d R(d) T(mn/d^2) Z^2` as multisets.
pub fn verify_lattice_hecke(m: u64, n: u64) -> Result<LatticeHeckeReport> {
    if m == 0 || n == 0 {
        return Err(Error::Input("Hecke indices must be positive".into()));
    }
    let z2 = LatticeSum::ambient(2);
    let lhs = z2.hecke_t(n).hecke_t(m);
    let mut rhs = LatticeSum::default();
    for d in divisors(gcd(m, n)) {
        rhs.add_scaled(&z2.hecke_t(m * n / (d * d)).scale_r(d), d);
    }
    Ok(LatticeHeckeReport {
        m,
        n,
        lhs_count: lhs.count(),
        rhs_count: rhs.count(),
        distinct_lattices: lhs.0.len(),
        pass: lhs == rhs,
    })
}

/// `T(m) T(n) = T(n) T(m)` on `Z^2`.
pub fn hecke_commute(m: u64, n: u64) -> bool {
    let z2 = LatticeSum::ambient(2);
    z2.hecke_t(n).hecke_t(m) == z2.hecke_t(m).hecke_t(n)
}

/// `C_L(M/G)` over the torus covering attached to `L`, divided by the deck
/// group `Z^d / L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FunctorValue {
    /// Orbits of deck × G on the pairs `(ρ, x)`.
    pub value: u64,
    /// Orbits of G alone.
    pub g_orbits: u64,
    /// Every deck element fixes every G-orbit of pairs.
    pub deck_trivial: bool,
}

pub fn functor_value(m: &FinGSet, g: &FiniteGroup, l: &SublatticeHNF, ctx: &Context) -> Result<FunctorValue> {
    if m.group_order() != g.order() {
        return Err(Error::InvalidGSet("G-set does not match the group".into()));
    }
    let h = SubgroupClass::from_lattice(l.clone())?;
    let t = enumerate_rho_classes(&h, g, ctx)?;
    let po = pair_orbits(&t, m);
    let mut roots: Vec<usize> = (0..po.len()).map(|p| po.uf_g.find(p)).collect();
    roots.sort_unstable();
    roots.dedup();
    let mut deck_trivial = true;
    'deck: for a in 1..t.deck.order() {
        for (i, rho) in t.homs.iter().enumerate() {
            let j = t.homs.index_of(&t.deck_image(a, rho)).expect("homs are closed under deck moves");
            for &x in &po.fixed[i] {
                let (p, q) = (po.pos(i, x), po.pos(j, x));
                if q.is_none() || po.uf_g.find(p.unwrap()) != po.uf_g.find(q.unwrap()) {
                    deck_trivial = false;
                    break 'deck;
                }
            }
        }
    }
    Ok(FunctorValue { value: po.count, g_orbits: roots.len() as u64, deck_trivial })
}

/// Memoized functor values keyed by lattice.
struct FunctorCache<'a> {
    m: &'a FinGSet,
    g: &'a FiniteGroup,
    ctx: &'a Context,
    values: BTreeMap<SublatticeHNF, FunctorValue>,
    deck_trivial: bool,
}

impl FunctorCache<'_> {
    fn get(&mut self, l: &SublatticeHNF) -> Result<u64> {
        if let Some(v) = self.values.get(l) {
            return Ok(v.value);
        }
        self.ctx.budget.check("functor evaluation")?;
        let v = functor_value(self.m, self.g, l, self.ctx)?;
        self.deck_trivial &= v.deck_trivial;
        self.values.insert(l.clone(), v);
        Ok(v.value)
    }
}

/// `|(T(n) F)(T)|`: the sum of functor values over index-n sublattices.
pub fn functor_hecke_eval(m: &FinGSet, g: &FiniteGroup, n: u64, ctx: &Context) -> Result<u64> {
    let mut cache = FunctorCache { m, g, ctx, values: BTreeMap::new(), deck_trivial: true };
    let mut total = 0;
    for l in SublatticeHNF::enumerate(2, n) {
        total += cache.get(&l)?;
    }
    if !cache.deck_trivial {
        return Err(Error::Internal("deck group acts nontrivially on a functor value".into()));
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctorHeckeReport {
    pub m: u64,
    pub n: u64,
    /// `sum_{[Z^2:H]=m} sum_{[H:K]=n} |F(T_K)|`.
    pub lhs: u64,
    /// `(d, sum_{[Z^2:L]=mn/d^2} |F(T_{dL})|)` for `d | (m, n)`, unweighted.
    pub rhs_terms: Vec<(u64, u64)>,
    pub rhs: u64,
    pub lattices_evaluated: usize,
    pub deck_trivial: bool,
    pub pass: bool,
}

pub fn verify_functor_hecke(m_set: &FinGSet, g: &FiniteGroup, m: u64, n: u64, ctx: &Context) -> Result<FunctorHeckeReport> {
    if m == 0 || n == 0 {
        return Err(Error::Input("Hecke indices must be positive".into()));
    }
    let mut cache = FunctorCache { m: m_set, g, ctx, values: BTreeMap::new(), deck_trivial: true };
    let mut lhs = 0;
    for h in SublatticeHNF::enumerate(2, m) {
        for k in h.sublattices(n) {
            lhs += cache.get(&k)?;
        }
    }
    let mut rhs_terms = vec![];
    for d in divisors(gcd(m, n)) {
        let mut s = 0;
        for l in SublatticeHNF::enumerate(2, m * n / (d * d)) {
            s += cache.get(&l.scale(d as i64))?;
        }
        rhs_terms.push((d, s));
    }
    let rhs = rhs_terms.iter().map(|&(d, s)| d * s).sum();
    Ok(FunctorHeckeReport {
        m,
        n,
        lhs,
        rhs_terms,
        rhs,
        lattices_evaluated: cache.values.len(),
        deck_trivial: cache.deck_trivial,
        pass: lhs == rhs && cache.deck_trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::chi_gamma;
    use crate::presentation::GammaSpec;
    use crate::subgroups::sigma1;

    fn ctx() -> Context {
        Context::sequential()
    }

    #[test]
    fn operator_examples() {
        let z2 = LatticeSum::ambient(2);
        assert_eq!(z2.hecke_t(1), z2);
        assert_eq!(z2.scale_r(1), z2);
        let t2 = z2.hecke_t(2);
        assert_eq!(t2.0.len(), 3);
        assert!(t2.0.values().all(|&k| k == 1));
        assert_eq!(t2.hecke_t(2).count(), 9);
        let r2 = z2.scale_r(2);
        let (l, _) = r2.0.iter().next().unwrap();
        assert_eq!(l.index(), 4);
        assert_eq!(l.basis(), &[vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn scaling_commutes_with_hecke() {
        let z2 = LatticeSum::ambient(2);
        for d in 1..=6 {
            for n in 1..=6 {
                assert_eq!(z2.hecke_t(n).scale_r(d), z2.scale_r(d).hecke_t(n));
            }
        }
    }

    #[test]
    fn hecke_identity_examples() {
        let r = verify_lattice_hecke(2, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs_count, 12);
        assert_eq!(r.lhs_count, sigma1(6));
        let r = verify_lattice_hecke(2, 2).unwrap();
        assert!(r.pass);
        assert_eq!((r.lhs_count, r.rhs_count), (9, 9));
        assert!(verify_lattice_hecke(4, 2).unwrap().pass);
        assert!(hecke_commute(4, 6));
    }

    #[test]
    fn multiplicities_matter() {
        // T(2)T(2) hits 2Z^2 three times: once per index-2 lattice
        let z2 = LatticeSum::ambient(2);
        let tt = z2.hecke_t(2).hecke_t(2);
        let twice = SublatticeHNF::full(2).scale(2);
        assert_eq!(tt.0[&twice], 3);
        assert_eq!(z2.hecke_t(4).0[&twice], 1);
    }

    #[test]
    fn sub_sublattices_are_sublattices() {
        for h in SublatticeHNF::enumerate(2, 4) {
            for k in h.sublattices(3) {
                assert_eq!(k.index(), 12);
                for row in k.basis() {
                    assert!(h.contains(row));
                }
            }
        }
    }

    #[test]
    fn functor_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = FiniteGroup::trivial();
        let pt = FinGSet::point(&s3);
        assert_eq!(functor_hecke_eval(&pt, &s3, 1, &ctx()).unwrap(), chi_gamma(&pt, &s3, &GammaSpec::free_abelian(2), &ctx()).unwrap());
        assert_eq!(functor_hecke_eval(&pt, &s3, 2, &ctx()).unwrap(), 24);
        for n in 1..=8 {
            assert_eq!(functor_hecke_eval(&FinGSet::point(&t), &t, n, &ctx()).unwrap(), sigma1(n));
        }
        let v = functor_value(&pt, &s3, &SublatticeHNF::enumerate(2, 3)[1], &ctx()).unwrap();
        assert!(v.deck_trivial);
        assert_eq!(v.value, v.g_orbits);
    }

    #[test]
    fn functor_hecke_identity() {
        let t = FiniteGroup::trivial();
        for (m, n) in [(2, 2), (2, 3), (4, 2)] {
            let r = verify_functor_hecke(&FinGSet::point(&t), &t, m, n, &ctx()).unwrap();
            assert!(r.pass);
            let want: u64 = divisors(gcd(m, n)).map(|d| d * sigma1(m * n / (d * d))).sum();
            assert_eq!(r.lhs, want);
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(verify_functor_hecke(&FinGSet::point(&s3), &s3, 2, 2, &ctx()).unwrap().pass);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(verify_functor_hecke(&FinGSet::regular(&z2), &z2, 2, 3, &ctx()).unwrap().pass);
    }

    #[test]
    fn multiplicative_relations() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let m = FinGSet::regular(&z2);
        let eval = |n| functor_hecke_eval(&m, &z2, n, &ctx()).unwrap();
        for (a, b) in [(2, 3), (3, 4)] {
            assert_eq!(verify_functor_hecke(&m, &z2, a, b, &ctx()).unwrap().lhs, eval(a * b));
        }
        for p in [2u64, 3] {
            for r in 1..=2u32 {
                let rep = verify_functor_hecke(&m, &z2, p, p.pow(r), &ctx()).unwrap();
                let scaled = rep.rhs_terms.iter().find(|t| t.0 == p).unwrap().1;
                assert_eq!(rep.lhs, eval(p.pow(r + 1)) + p * scaled);
            }
        }
    }
}
