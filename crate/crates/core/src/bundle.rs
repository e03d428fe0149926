//! Splitting `θ: Γ → G ≀ S_n` into irreducible Γ-G bundles and checking the
//! resulting formula for the order of its centralizer.

use std::collections::{BTreeMap, HashMap};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{centralizers, perm, wreath_product, Elem, FiniteGroup, GroupLimits};
use crate::homspace::{enumerate_homs, hom_classes, RhoClassTable};
use crate::par::Context;
use crate::presentation::{evaluate_word, GammaSpec};
use crate::subgroups::coset::{canonical, inverse_table};
use crate::subgroups::{enumerate_subgroup_classes, SubgroupClass};

/// One isomorphism type of irreducible summand with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BundleSummand {
    /// `|Γ/H|`, the size of the base orbit.
    pub index: usize,
    /// Position of H among the index-`index` subgroup classes.
    pub subgroup: usize,
    /// Position of `[ρ]` in the class table of H.
    pub rho_class: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleDecomposition {
    pub degree: usize,
    /// Sorted by `(index, subgroup, rho_class)`.
    pub summands: Vec<BundleSummand>,
}

impl BundleDecomposition {
    pub fn degree_sum(&self) -> usize {
        self.summands.iter().map(|s| s.index * s.multiplicity).sum()
    }
}

/// Subgroup classes and their ρ-class tables for every index up to `n`.
pub struct BundleContext {
    pub gamma: GammaSpec,
    pub base: FiniteGroup,
    pub wreath: FiniteGroup,
    pub n: usize,
    /// `classes[d - 1]` lists the index-d subgroup classes.
    pub classes: Vec<Vec<SubgroupClass>>,
    pub tables: Vec<Vec<RhoClassTable>>,
    keys: Vec<HashMap<Vec<u32>, usize>>,
}

impl BundleContext {
    pub fn new(gamma: &GammaSpec, g: &FiniteGroup, n: usize, limits: &GroupLimits, ctx: &Context) -> Result<Self> {
        if matches!(gamma, GammaSpec::Presented { .. }) {
            return Err(Error::Unsupported("bundle decomposition needs a free or free abelian Γ".into()));
        }
        gamma.validate()?;
        let wreath = wreath_product(g, n, limits)?;
        let mut classes = vec![];
        let mut tables = vec![];
        let mut keys = vec![];
        for d in 1..=n {
            let cl = enumerate_subgroup_classes(gamma, d, ctx)?;
            let t = cl
                .iter()
                .map(|h| crate::homspace::enumerate_rho_classes(h, g, ctx))
                .collect::<Result<Vec<_>>>()?;
            keys.push(cl.iter().enumerate().map(|(i, h)| (h.class_key(), i)).collect());
            classes.push(cl);
            tables.push(t);
        }
        Ok(BundleContext { gamma: gamma.clone(), base: g.clone(), wreath, n, classes, tables, keys })
    }

    fn table(&self, s: &BundleSummand) -> &RhoClassTable {
        &self.tables[s.index - 1][s.subgroup]
    }

    /// Irreducible decomposition of `θ`, given by the images of the
    /// generators of Γ in `G ≀ S_n`.
    pub fn decompose(&self, theta: &[Elem]) -> Result<BundleDecomposition> {
        let k = self.gamma.rank();
        if theta.len() != k {
            return Err(Error::Input(format!("θ needs {k} images, got {}", theta.len())));
        }
        let info = self.wreath.wreath_info().expect("built by wreath_product");
        let perms: Vec<Vec<u32>> = theta.iter().map(|&t| info.decode(t).perm).collect();
        let n = self.n;

        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = vec![];
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[start] = id;
            let mut orbit = vec![start];
            let mut idx = 0;
            while idx < orbit.len() {
                let x = orbit[idx];
                idx += 1;
                for p in &perms {
                    let y = p[x] as usize;
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = id;
                        orbit.push(y);
                    }
                }
            }
            orbits.push(orbit);
        }

        let mut counts: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for orbit in &orbits {
            let size = orbit.len();
            let mut local = vec![0usize; n];
            for (j, &x) in orbit.iter().enumerate() {
                local[x] = j;
            }
            let flat: Vec<u32> = perms
                .iter()
                .flat_map(|p| orbit.iter().map(|&x| local[p[x] as usize] as u32).collect::<Vec<_>>())
                .collect();
            debug_assert!(inverse_table(&flat, k, size).iter().all(|&v| (v as usize) < size));
            let (key, b, _) = canonical(&flat, k, size);
            let subgroup = *self.keys[size - 1]
                .get(&key)
                .ok_or_else(|| Error::Internal("orbit matches no enumerated subgroup class".into()))?;
            let table = &self.tables[size - 1][subgroup];
            let point = orbit[b];
            let rho = table
                .schreier
                .generators
                .iter()
                .map(|w| {
                    let e = info.decode(evaluate_word(w, theta, &self.wreath)?);
                    if e.perm[point] as usize != point {
                        return Err(Error::Internal("Schreier generator moves its basepoint".into()));
                    }
                    Ok(e.base[point])
                })
                .collect::<Result<Vec<Elem>>>()?;
            let rho_class = table
                .class_of_rho(&rho)
                .ok_or_else(|| Error::Internal("cocycle is not a homomorphism".into()))?;
            *counts.entry((size, subgroup, rho_class)).or_default() += 1;
        }
        let summands = counts
            .into_iter()
            .map(|((index, subgroup, rho_class), multiplicity)| BundleSummand { index, subgroup, rho_class, multiplicity })
            .collect();
        let dec = BundleDecomposition { degree: n, summands };
        if dec.degree_sum() != n {
            return Err(Error::Internal(format!("summand degrees add to {}, not {n}", dec.degree_sum())));
        }
        Ok(dec)
    }

    /// `prod over summands of aut(H, ρ)^r · r!`.
    pub fn centralizer_order_formula(&self, dec: &BundleDecomposition) -> u128 {
        dec.summands
            .iter()
            .map(|s| {
                let aut = self.table(s).classes[s.rho_class].aut_order as u128;
                aut.pow(s.multiplicity as u32) * perm::factorial(s.multiplicity)
            })
            .product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum SamplingPolicy {
    /// Every homomorphism.
    Exhaustive,
    /// One homomorphism per conjugacy class.
    ClassRepresentatives,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerFailure {
    pub theta: Vec<Elem>,
    pub degree_sum: usize,
    pub brute_force: u128,
    pub formula: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerReport {
    pub gamma: GammaSpec,
    pub group_order: usize,
    pub n: usize,
    pub policy: SamplingPolicy,
    pub homs_total: usize,
    pub checked: usize,
    /// Distinct centralizer orders seen, with how often each occurred.
    pub orders: BTreeMap<u128, usize>,
    /// The same histogram for the formula values.
    pub formula_orders: BTreeMap<u128, usize>,
    /// Checks against `prod r^{m_r} m_r!` from the cycle type, when G is trivial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_agree: Option<bool>,
    pub failures: Vec<CentralizerFailure>,
    pub pass: bool,
}

/// `prod r^{m_r} m_r!` for the cycle type of a permutation.
pub fn classical_centralizer_order(p: &[u32]) -> u128 {
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for r in perm::cycle_type(p) {
        *mult.entry(r).or_default() += 1;
    }
    mult.into_iter()
        .map(|(r, m)| (r as u128).pow(m as u32) * perm::factorial(m))
        .product()
}

pub fn verify_centralizer(
    gamma: &GammaSpec,
    g: &FiniteGroup,
    n: usize,
    policy: SamplingPolicy,
    limits: &GroupLimits,
    ctx: &Context,
) -> Result<CentralizerReport> {
    let bc = BundleContext::new(gamma, g, n, limits, ctx)?;
    let homs = enumerate_homs(gamma, &bc.wreath, ctx)?;
    let chosen: Vec<usize> = match policy {
        SamplingPolicy::Exhaustive => (0..homs.len()).collect(),
        SamplingPolicy::ClassRepresentatives => hom_classes(&homs).representatives,
        SamplingPolicy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = sample(&mut rng, homs.len(), count.min(homs.len())).into_vec();
            v.sort_unstable();
            v
        }
    };
    let sets: Vec<Vec<Elem>> = chosen.iter().map(|&i| homs.get(i).to_vec()).collect();
    ctx.budget.check("centralizer brute force")?;
    let cents = centralizers(&bc.wreath, &sets);
    let results = ctx.exec.try_map_range(sets.len(), |i| {
        let dec = bc.decompose(&sets[i])?;
        Ok((dec.degree_sum(), bc.centralizer_order_formula(&dec)))
    })?;

    let trivial = g.order() == 1;
    let info = bc.wreath.wreath_info().expect("built by wreath_product");
    let mut orders = BTreeMap::new();
    let mut formula_orders = BTreeMap::new();
    let mut failures = vec![];
    let mut classical_agree = trivial.then_some(true);
    for ((theta, cent), &(degree_sum, formula)) in sets.iter().zip(&cents).zip(&results) {
        let brute = cent.len() as u128;
        *orders.entry(brute).or_default() += 1;
        *formula_orders.entry(formula).or_default() += 1;
        if trivial && gamma.rank() == 1 && classical_centralizer_order(&info.decode(theta[0]).perm) != brute {
            classical_agree = Some(false);
        }
        if degree_sum != n || brute != formula {
            failures.push(CentralizerFailure { theta: theta.clone(), degree_sum, brute_force: brute, formula });
        }
    }
    let pass = failures.is_empty() && classical_agree != Some(false);
    Ok(CentralizerReport {
        gamma: gamma.clone(),
        group_order: g.order(),
        n,
        policy,
        homs_total: homs.len(),
        checked: sets.len(),
        orders,
        formula_orders,
        classical_agree,
        failures,
        pass,
    })
}
