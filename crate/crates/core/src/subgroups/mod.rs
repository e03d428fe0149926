//! Finite-index subgroups of Γ up to conjugacy, as pointed transitive coset
//! actions, with deck groups and Schreier generators.

pub mod coset;
pub mod hnf;
pub mod schreier;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Context;
use crate::presentation::{GammaSpec, Word};
use coset::{canonical, inverse_table, standardize, UNDEF};
pub use hnf::{sigma1, SublatticeHNF};
pub use schreier::{conjugate_into_generators, schreier_generators, tree_words, Schreier};

/// A finite-index subgroup H, the stabilizer of point 0 in a transitive
/// action of Γ on `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupClass {
    pub gamma: GammaSpec,
    pub degree: usize,
    /// `action[i][p]` is `g_{i+1} · p`, standardized from the basepoint.
    pub action: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<SublatticeHNF>,
    #[serde(skip)]
    inverse: Vec<Vec<u32>>,
}

impl SubgroupClass {
    /// Validates a transitive action respecting the relators and relabels it
    /// from the basepoint; the stabilizer of 0 is unchanged.
    pub fn from_action(gamma: GammaSpec, action: Vec<Vec<u32>>) -> Result<Self> {
        gamma.validate()?;
        let k = gamma.rank();
        let n = action.first().map_or(0, Vec::len);
        if action.len() != k || n == 0 || action.iter().any(|a| a.len() != n || !crate::group::perm::is_permutation(a)) {
            return Err(Error::Input(format!("action must be {k} permutations of one degree")));
        }
        let flat: Vec<u32> = action.concat();
        let inv = inverse_table(&flat, k, n);
        if !is_transitive(&flat, &inv, k, n) {
            return Err(Error::Input("action is not transitive".into()));
        }
        let (std, _) = standardize(&flat, &inv, k, n, 0);
        let h = SubgroupClass::from_standard(gamma, n, &std);
        for r in h.gamma.relators() {
            if (0..n).any(|p| h.act_word(&r, p) != p) {
                return Err(Error::Input(format!("action does not satisfy relator {r}")));
            }
        }
        Ok(h)
    }

    fn from_standard(gamma: GammaSpec, n: usize, flat: &[u32]) -> Self {
        let k = gamma.rank();
        let inv = inverse_table(flat, k, n);
        SubgroupClass {
            gamma,
            degree: n,
            action: flat.chunks(n).map(<[u32]>::to_vec).collect(),
            lattice: None,
            inverse: inv.chunks(n).map(<[u32]>::to_vec).collect(),
        }
    }

    /// The coset action of `Z^d` on `Z^d / L`.
    pub fn from_lattice(l: SublatticeHNF) -> Result<Self> {
        let d = l.dim();
        let diag = l.diagonal();
        let n = l.index() as usize;
        let encode = |v: &[i64]| v.iter().zip(&diag).rev().fold(0i64, |acc, (x, a)| acc * a + x) as usize;
        let mut reps = vec![vec![0i64; d]; n];
        for (c, rep) in reps.iter_mut().enumerate() {
            let mut c = c as i64;
            for (x, a) in rep.iter_mut().zip(&diag) {
                *x = c % a;
                c /= a;
            }
        }
        let mut flat = vec![UNDEF; d * n];
        for i in 0..d {
            for (p, v) in reps.iter().enumerate() {
                let mut w = v.clone();
                w[i] += 1;
                flat[i * n + p] = encode(&l.reduce(&w)) as u32;
            }
        }
        let inv = inverse_table(&flat, d, n);
        let (std, _) = standardize(&flat, &inv, d, n, 0);
        let mut h = SubgroupClass::from_standard(GammaSpec::free_abelian(d), n, &std);
        h.lattice = Some(l);
        Ok(h)
    }

    pub fn index(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn act(&self, gen: usize, p: usize) -> usize {
        self.action[gen][p] as usize
    }

    #[inline]
    pub fn preimage(&self, gen: usize, p: usize) -> usize {
        self.inverse[gen][p] as usize
    }

    /// `w · p`, letters applied right to left.
    pub fn act_word(&self, w: &Word, p: usize) -> usize {
        w.0.iter().rev().fold(p, |p, &l| {
            let i = l.unsigned_abs() as usize - 1;
            if l > 0 {
                self.act(i, p)
            } else {
                self.preimage(i, p)
            }
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.act_word(w, 0) == 0
    }

    pub fn flat(&self) -> Vec<u32> {
        self.action.concat()
    }

    /// Key identifying the conjugacy class: the least standardized table
    /// over all basepoints.
    pub fn class_key(&self) -> Vec<u32> {
        canonical(&self.flat(), self.action.len(), self.degree).0
    }

    /// Points whose stabilizer equals that of 0.
    pub fn deck_points(&self) -> Vec<usize> {
        let flat = self.flat();
        let (k, n) = (self.action.len(), self.degree);
        let inv = inverse_table(&flat, k, n);
        (0..n).filter(|&b| standardize(&flat, &inv, k, n, b).0 == flat).collect()
    }

    /// Domain of `Hom(H, G)` on the Schreier generators.
    pub fn hom_domain(&self) -> Result<GammaSpec> {
        match self.gamma {
            GammaSpec::Free { rank } => Ok(GammaSpec::free(1 + self.degree * (rank - 1))),
            GammaSpec::FreeAbelian { rank } => Ok(GammaSpec::free_abelian(rank)),
            GammaSpec::Presented { .. } => Err(Error::Unsupported(
                "subgroup homomorphisms need a free or free abelian Γ".into(),
            )),
        }
    }
}

fn is_transitive(flat: &[u32], inv: &[u32], k: usize, n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        for i in 0..k {
            for t in [flat, inv] {
                let q = t[i * n + p] as usize;
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Covering translations of H, i.e. `N_Γ(H)/H`, acting on the points
/// sharing the basepoint stabilizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeckGroup {
    pub elements: Vec<usize>,
    /// `u_j` with `u_j · 0 = j`, a normalizing element for each deck point.
    pub words: Vec<Word>,
    /// `translations[a][p]`: the image of `p` under the translation taking 0
    /// to `elements[a]`.
    pub translations: Vec<Vec<u32>>,
}

impl DeckGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of the composite `elements[a] ∘ elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.translations[a][self.elements[b]] as usize;
        self.elements.binary_search(&p).expect("deck group is closed")
    }
}

pub fn deck_group(h: &SubgroupClass) -> DeckGroup {
    let elements = h.deck_points();
    let tree = tree_words(h);
    let words: Vec<Word> = elements.iter().map(|&j| tree[j].clone()).collect();
    let translations = elements
        .iter()
        .map(|&j| (0..h.degree).map(|p| h.act_word(&tree[p], j) as u32).collect())
        .collect();
    DeckGroup { elements, words, translations }
}

/// Subgroup classes of index `n` with the number of subgroups they cover.
#[derive(Debug, Clone)]
pub struct SubgroupEnumeration {
    pub classes: Vec<SubgroupClass>,
    /// Total number of index-n subgroups (not classes).
    pub subgroups: u64,
    pub deck_orders: Vec<usize>,
}

pub fn enumerate_subgroups(gamma: &GammaSpec, n: usize, ctx: &Context) -> Result<SubgroupEnumeration> {
    gamma.validate()?;
    if n == 0 {
        return Err(Error::Input("index must be at least 1".into()));
    }
    match gamma {
        GammaSpec::FreeAbelian { rank } => {
            let lattices = SublatticeHNF::enumerate(*rank, n as u64);
            let classes = lattices
                .into_iter()
                .map(SubgroupClass::from_lattice)
                .collect::<Result<Vec<_>>>()?;
            Ok(SubgroupEnumeration {
                subgroups: classes.len() as u64,
                deck_orders: vec![n; classes.len()],
                classes,
            })
        }
        GammaSpec::Free { rank } | GammaSpec::Presented { rank, .. } => {
            let relators = gamma.relators();
            let r = coset::low_index(*rank, n, &relators, ctx)?;
            let (classes, deck_orders) = r
                .classes
                .into_iter()
                .map(|(t, d)| (SubgroupClass::from_standard(gamma.clone(), n, &t), d))
                .unzip();
            Ok(SubgroupEnumeration { classes, subgroups: r.subgroups, deck_orders })
        }
    }
}

/// One representative per conjugacy class of index-`n` subgroups.
pub fn enumerate_subgroup_classes(gamma: &GammaSpec, n: usize, ctx: &Context) -> Result<Vec<SubgroupClass>> {
    Ok(enumerate_subgroups(gamma, n, ctx)?.classes)
}
