//! Finite groups as dense element indices with an explicit multiplication law.
//!
//! Small groups carry a full multiplication table. Larger wreath products,
//! direct products and permutation groups compute products on demand from
//! their structure; the public interface is the same either way.

pub mod classes;
pub mod perm;
pub mod wreath;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;

pub use classes::{centralizer, centralizers, conjugacy_classes, ConjClassTable};
pub use wreath::{wreath_action, wreath_product, WreathElement, WreathInfo};

pub type Elem = usize;

/// Default cap on the order of any constructed group.
pub const DEFAULT_MAX_ORDER: usize = 1_000_000;
/// Groups up to this order get a materialized multiplication table.
pub const DEFAULT_TABLE_MAX: usize = 4096;

const FULL_CHECK_ORDER: usize = 512;
const SAMPLED_TRIPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupLimits {
    pub max_order: usize,
    pub table_max: usize,
}

impl Default for GroupLimits {
    fn default() -> Self {
        GroupLimits {
            max_order: DEFAULT_MAX_ORDER,
            table_max: DEFAULT_TABLE_MAX,
        }
    }
}

/// JSON description of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    Trivial,
    Cyclic { n: usize },
    Symmetric { n: usize },
    Cayley { order: usize, table: Vec<Vec<usize>> },
    Perm { degree: usize, generators: Vec<Vec<u32>> },
    Product { factors: Vec<GroupSpec> },
    Wreath { base: Box<GroupSpec>, n: usize },
}

pub(crate) trait ComputedLaw: Send + Sync {
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn inv(&self, a: Elem) -> Elem;
}

enum Law {
    Table(Vec<u32>),
    Computed(Box<dyn ComputedLaw>),
}

/// A permutation representation of the group on `degree` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRep {
    pub degree: usize,
    pub images: Vec<Vec<u32>>,
}

struct GroupData {
    order: usize,
    identity: Elem,
    inv: Vec<u32>,
    generators: Vec<Elem>,
    labels: Option<Vec<String>>,
    law: Law,
    perm_rep: Option<PermRep>,
    wreath: Option<WreathInfo>,
}

/// A finite group on the element set `0..order`.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.0.order)
            .field("generators", &self.0.generators)
            .field("tabled", &matches!(self.0.law, Law::Table(_)))
            .finish()
    }
}

impl FiniteGroup {
    #[inline]
    pub fn order(&self) -> usize {
        self.0.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.law {
            Law::Table(t) => t[a * self.0.order + b] as Elem,
            Law::Computed(l) => l.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.0.inv[a] as Elem
    }

    pub fn generators(&self) -> &[Elem] {
        &self.0.generators
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.order
    }

    pub fn has_table(&self) -> bool {
        matches!(self.0.law, Law::Table(_))
    }

    pub fn perm_rep(&self) -> Option<&PermRep> {
        self.0.perm_rep.as_ref()
    }

    pub fn wreath_info(&self) -> Option<&WreathInfo> {
        self.0.wreath.as_ref()
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.0.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    #[inline]
    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// `g x g^-1`
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: Elem, mut e: i64) -> Elem {
        let mut base = if e < 0 {
            e = -e;
            self.inv(a)
        } else {
            a
        };
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.commute(a, b)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![self.identity()];
        seen[self.identity()] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks the group axioms and that the generators generate.
    ///
    /// Associativity is checked on all triples up to order 512 and on
    /// 10^5 seeded random triples above that.
    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        let e = self.identity();
        for a in self.elements() {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(Error::InvalidGroup(format!("identity fails on {a}")));
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != e || self.mul(ai, a) != e {
                return Err(Error::InvalidGroup(format!("inverse fails on {a}")));
            }
        }
        let assoc = |a: Elem, b: Elem, c: Elem| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= FULL_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "not associative on ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!(
                        "not associative on ({a},{b},{c})"
                    )));
                }
            }
        }
        if self.closure(self.generators()).len() != n {
            return Err(Error::InvalidGroup("generators do not generate".into()));
        }
        Ok(())
    }

    // ---- constructors ----

    pub fn trivial() -> Self {
        FiniteGroup::from_parts(1, 0, vec![0], vec![], Law::Table(vec![0]))
            .with_perm_rep(PermRep { degree: 1, images: vec![vec![0]] })
            .with_labels(vec!["e".into()])
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        let inv = (0..n).map(|a| ((n - a) % n) as u32).collect();
        let gens = if n == 1 { vec![] } else { vec![1] };
        let images = (0..n)
            .map(|k| (0..n).map(|i| ((i + k) % n) as u32).collect())
            .collect();
        Ok(FiniteGroup::from_parts(n, 0, inv, gens, Law::Table(table))
            .with_perm_rep(PermRep { degree: n, images })
            .with_labels((0..n).map(|k| k.to_string()).collect()))
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        FiniteGroup::symmetric_with(n, &GroupLimits::default())
    }

    pub fn symmetric_with(n: usize, limits: &GroupLimits) -> Result<Self> {
        if n <= 1 {
            return Ok(FiniteGroup::trivial());
        }
        let mut gens = vec![];
        let mut t = perm::identity(n);
        t.swap(0, 1);
        gens.push(t);
        if n >= 3 {
            gens.push((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        }
        FiniteGroup::from_permutations(n, &gens, limits)
    }

    /// Closes the permutation generators to the full group.
    pub fn from_permutations(degree: usize, gens: &[Vec<u32>], limits: &GroupLimits) -> Result<Self> {
        for g in gens {
            if g.len() != degree || !perm::is_permutation(g) {
                return Err(Error::InvalidGroup(format!(
                    "{g:?} is not a permutation of degree {degree}"
                )));
            }
        }
        let id = perm::identity(degree);
        let mut elems = vec![id.clone()];
        let mut lookup: HashMap<Vec<u32>, u32> = HashMap::from([(id, 0)]);
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            head += 1;
            for g in gens {
                let y = perm::compose(g, &x);
                if !lookup.contains_key(&y) {
                    if elems.len() >= limits.max_order {
                        return Err(Error::OrderOverflow {
                            order: elems.len() as u128 + 1,
                            max: limits.max_order,
                        });
                    }
                    lookup.insert(y.clone(), elems.len() as u32);
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let inv: Vec<u32> = elems.iter().map(|x| lookup[&perm::inverse(x)]).collect();
        let mut gen_idx: Vec<Elem> = gens
            .iter()
            .map(|g| lookup[g] as Elem)
            .filter(|&g| g != 0)
            .collect();
        gen_idx.dedup();
        let labels = (n <= 5040).then(|| elems.iter().map(|x| perm::cycle_notation(x)).collect());
        let rep = PermRep { degree, images: elems.clone() };
        let law = PermLaw { elems, lookup, inv: inv.clone() };
        let g = FiniteGroup::from_computed(n, 0, inv, gen_idx, Box::new(law), limits);
        let g = g.with_perm_rep(rep);
        Ok(match labels {
            Some(l) => g.with_labels(l),
            None => g,
        })
    }

    /// Builds a group from a full Cayley table, locating the identity and
    /// inverses and validating the axioms.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > DEFAULT_TABLE_MAX * 8 {
            return Err(Error::OrderOverflow { order: n as u128, max: DEFAULT_TABLE_MAX * 8 });
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {bad} out of range in row {a}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{a} has no inverse")))?;
            inv.push(b as u32);
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let mut g = FiniteGroup::from_parts(n, identity, inv, vec![], Law::Table(flat));
        let gens = greedy_generators(&g);
        Arc::get_mut(&mut g.0).unwrap().generators = gens;
        g.validate()?;
        Ok(g)
    }

    pub fn direct_product(factors: &[FiniteGroup], limits: &GroupLimits) -> Result<Self> {
        let order: u128 = factors.iter().map(|f| f.order() as u128).product();
        if order > limits.max_order as u128 {
            return Err(Error::OrderOverflow { order, max: limits.max_order });
        }
        let law = ProductLaw { factors: factors.to_vec() };
        let n = order as usize;
        let identity = law.encode(&factors.iter().map(|f| f.identity()).collect::<Vec<_>>());
        let inv: Vec<u32> = (0..n).map(|a| law.inv(a) as u32).collect();
        let mut gens = vec![];
        for (k, f) in factors.iter().enumerate() {
            for &s in f.generators() {
                let mut parts: Vec<Elem> = factors.iter().map(|f| f.identity()).collect();
                parts[k] = s;
                gens.push(law.encode(&parts));
            }
        }
        let labels = factors.iter().all(|f| f.0.labels.is_some()).then(|| {
            (0..n)
                .map(|a| {
                    let parts = law.decode(a);
                    let inner: Vec<String> = parts
                        .iter()
                        .zip(factors)
                        .map(|(&p, f)| f.label(p))
                        .collect();
                    format!("({})", inner.join(", "))
                })
                .collect()
        });
        let g = FiniteGroup::from_computed(n, identity, inv, gens, Box::new(law), limits);
        Ok(match labels {
            Some(l) => g.with_labels(l),
            None => g,
        })
    }

    fn from_parts(order: usize, identity: Elem, inv: Vec<u32>, generators: Vec<Elem>, law: Law) -> Self {
        FiniteGroup(Arc::new(GroupData {
            order,
            identity,
            inv,
            generators,
            labels: None,
            law,
            perm_rep: None,
            wreath: None,
        }))
    }

    /// Materializes a table from the computed law when the order allows it.
    pub(crate) fn from_computed(
        order: usize,
        identity: Elem,
        inv: Vec<u32>,
        generators: Vec<Elem>,
        law: Box<dyn ComputedLaw>,
        limits: &GroupLimits,
    ) -> Self {
        let law = if order <= limits.table_max {
            let rows = Exec::default().map_range(order, |a| {
                (0..order).map(|b| law.mul(a, b) as u32).collect::<Vec<u32>>()
            });
            Law::Table(rows.concat())
        } else {
            Law::Computed(law)
        };
        FiniteGroup::from_parts(order, identity, inv, generators, law)
    }

    fn data_mut(&mut self) -> &mut GroupData {
        Arc::get_mut(&mut self.0).expect("group under construction is uniquely owned")
    }

    fn with_perm_rep(mut self, rep: PermRep) -> Self {
        self.data_mut().perm_rep = Some(rep);
        self
    }

    fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.data_mut().labels = Some(labels);
        self
    }

    pub(crate) fn with_wreath(mut self, info: WreathInfo) -> Self {
        self.data_mut().wreath = Some(info);
        self
    }
}

fn greedy_generators(g: &FiniteGroup) -> Vec<Elem> {
    let mut gens = vec![];
    let mut span = vec![g.identity()];
    for a in g.elements() {
        if span.binary_search(&a).is_err() {
            gens.push(a);
            span = g.closure(&gens);
            if span.len() == g.order() {
                break;
            }
        }
    }
    gens
}

struct PermLaw {
    elems: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, u32>,
    inv: Vec<u32>,
}

impl ComputedLaw for PermLaw {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.lookup[&perm::compose(&self.elems[a], &self.elems[b])] as Elem
    }
    fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }
}

struct ProductLaw {
    factors: Vec<FiniteGroup>,
}

impl ProductLaw {
    fn encode(&self, parts: &[Elem]) -> Elem {
        parts
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&p, f)| acc * f.order() + p)
    }

    fn decode(&self, mut a: Elem) -> Vec<Elem> {
        let mut parts = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            parts[k] = a % f.order();
            a /= f.order();
        }
        parts
    }
}

impl ComputedLaw for ProductLaw {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (pa, pb) = (self.decode(a), self.decode(b));
        let parts: Vec<Elem> = self
            .factors
            .iter()
            .zip(pa.iter().zip(&pb))
            .map(|(f, (&x, &y))| f.mul(x, y))
            .collect();
        self.encode(&parts)
    }
    fn inv(&self, a: Elem) -> Elem {
        let parts: Vec<Elem> = self
            .factors
            .iter()
            .zip(self.decode(a))
            .map(|(f, x)| f.inv(x))
            .collect();
        self.encode(&parts)
    }
}

/// Builds and validates a group from its JSON description.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    build_group_with(spec, &GroupLimits::default())
}

pub fn build_group_with(spec: &GroupSpec, limits: &GroupLimits) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Trivial => Ok(FiniteGroup::trivial()),
        GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
        GroupSpec::Symmetric { n } => FiniteGroup::symmetric_with(*n, limits),
        GroupSpec::Cayley { order, table } => {
            if table.len() != *order {
                return Err(Error::InvalidGroup(format!(
                    "declared order {order} but table has {} rows",
                    table.len()
                )));
            }
            FiniteGroup::from_cayley(table)
        }
        GroupSpec::Perm { degree, generators } => {
            FiniteGroup::from_permutations(*degree, generators, limits)
        }
        GroupSpec::Product { factors } => {
            let built = factors
                .iter()
                .map(|f| build_group_with(f, limits))
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::direct_product(&built, limits)
        }
        GroupSpec::Wreath { base, n } => {
            let base = build_group_with(base, limits)?;
            wreath_product(&base, *n, limits)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_orders() {
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(FiniteGroup::trivial().order(), 1);
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.elements().all(|a| c4.elements().all(|b| c4.commute(a, b))));
    }

    #[test]
    fn klein_four_has_exponent_two() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v = FiniteGroup::direct_product(&[c2.clone(), c2], &GroupLimits::default()).unwrap();
        assert_eq!(v.order(), 4);
        // brute-force table check: every square is the identity
        for a in v.elements() {
            assert_eq!(v.mul(a, a), v.identity());
        }
        assert_eq!(v.exponent(), 2);
        v.validate().unwrap();
    }

    #[test]
    fn constructed_groups_validate() {
        for spec in [
            GroupSpec::Trivial,
            GroupSpec::Cyclic { n: 6 },
            GroupSpec::Symmetric { n: 4 },
            GroupSpec::Perm { degree: 4, generators: vec![vec![1, 2, 3, 0], vec![3, 2, 1, 0]] },
            GroupSpec::Wreath { base: Box::new(GroupSpec::Cyclic { n: 2 }), n: 3 },
        ] {
            build_group(&spec).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn cayley_rejects_non_associative_table() {
        // a loop of order 5 (Latin square with identity) that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley(&t), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn cayley_round_trip_of_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let table: Vec<Vec<usize>> = s3
            .elements()
            .map(|a| s3.elements().map(|b| s3.mul(a, b)).collect())
            .collect();
        let g = FiniteGroup::from_cayley(&table).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn permutation_generators_respect_order_cap() {
        let limits = GroupLimits { max_order: 100, table_max: 64 };
        let err = FiniteGroup::symmetric_with(5, &limits).unwrap_err();
        assert!(matches!(err, Error::OrderOverflow { .. }));
    }

    #[test]
    fn table_free_permutation_group_agrees_with_table() {
        let tabled = FiniteGroup::symmetric(4).unwrap();
        let free = FiniteGroup::symmetric_with(4, &GroupLimits { max_order: 1000, table_max: 1 }).unwrap();
        assert!(tabled.has_table() && !free.has_table());
        for a in tabled.elements() {
            for b in tabled.elements() {
                assert_eq!(tabled.mul(a, b), free.mul(a, b));
            }
        }
    }

    #[test]
    fn group_spec_json() {
        let spec: GroupSpec = serde_json::from_str(
            r#"{"kind":"wreath","base":{"kind":"product","factors":[{"kind":"cyclic","n":2},{"kind":"trivial"}]},"n":2}"#,
        )
        .unwrap();
        assert_eq!(build_group(&spec).unwrap().order(), 8);
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"cayley","order":2,"table":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(build_group(&spec).unwrap().order(), 2);
    }
}
