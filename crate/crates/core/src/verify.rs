//! Check records shared by the `verify` commands, and the full desk-scale
//! suite behind `verify all`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bundle::{verify_centralizer, CentralizerReport, SamplingPolicy};
use crate::error::Result;
use crate::euler::{chi_gamma, chi_gamma_set, verify_theorem_c, TheoremCOptions};
use crate::group::{FiniteGroup, GroupLimits};
use crate::gset::FinGSet;
use crate::lattice::{hecke_commute, verify_functor_hecke, verify_lattice_hecke, LatticeSum};
use crate::par::Context;
use crate::presentation::GammaSpec;
use crate::series::{ratio_string, CoeffTable, DmvvComparison, PQYSeries};
use crate::subgroups::{enumerate_subgroup_classes, enumerate_subgroups, sigma1, SublatticeHNF};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// Which identity the record checks.
    pub identity: String,
    pub inputs: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, identity: &str, inputs: Value, lhs: Value, rhs: Value, pass: bool) -> Self {
        CheckRecord { id: id.into(), identity: identity.into(), inputs, lhs, rhs, pass }
    }

    /// A record whose two sides are compared for equality.
    pub fn equal(id: impl Into<String>, identity: &str, inputs: Value, lhs: Value, rhs: Value) -> Self {
        let pass = lhs == rhs;
        CheckRecord::new(id, identity, inputs, lhs, rhs, pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: Vec<String>,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl VerifyReport {
    pub fn new(command: Vec<String>, records: Vec<CheckRecord>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        VerifyReport { command, records, pass, wall_ms: None }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn theorem_c_records(
    id: &str,
    inputs: Value,
    m: &FinGSet,
    g: &FiniteGroup,
    gamma: &GammaSpec,
    max_degree: usize,
    opts: &TheoremCOptions,
    ctx: &Context,
) -> Result<Vec<CheckRecord>> {
    let r = verify_theorem_c(m, g, gamma, max_degree, opts, ctx)?;
    let lhs: Vec<i64> = r.lhs.iter().map(|&c| c as i64).collect();
    let mut out = vec![CheckRecord::equal(
        format!("{id}/generating-function"),
        "generating-function",
        json!({"case": inputs.clone(), "max_degree": max_degree, "exponents": r.exponents}),
        json!(lhs),
        json!(r.rhs),
    )];
    if let Some(b) = &r.lhs_burnside {
        out.push(CheckRecord::equal(
            format!("{id}/burnside"),
            "burnside",
            json!({"case": inputs, "max_degree": max_degree}),
            json!(r.lhs),
            json!(b),
        ));
    }
    Ok(out)
}

pub fn centralizer_records(id: &str, inputs: Value, r: &CentralizerReport) -> Vec<CheckRecord> {
    let degree_ok = r.checked - r.failures.iter().filter(|f| f.degree_sum != r.n).count();
    let mut out = vec![
        CheckRecord::equal(format!("{id}/degree-sum"), "degree-sum", inputs.clone(), json!(degree_ok), json!(r.checked)),
        CheckRecord::new(
            format!("{id}/centralizer-order"),
            "centralizer-order",
            json!({"case": inputs.clone(), "policy": r.policy, "checked": r.checked, "homs": r.homs_total}),
            json!(r.orders),
            json!(r.formula_orders),
            r.failures.is_empty(),
        ),
    ];
    if let Some(ok) = r.classical_agree {
        out.push(CheckRecord::new(format!("{id}/classical"), "classical-centralizer", inputs, json!(ok), json!(true), ok));
    }
    out
}

pub fn lattice_hecke_record(m: u64, n: u64) -> Result<CheckRecord> {
    let r = verify_lattice_hecke(m, n)?;
    Ok(CheckRecord::new(
        format!("hecke-lattice/{m}-{n}"),
        "lattice-hecke",
        json!({"m": m, "n": n, "distinct_lattices": r.distinct_lattices}),
        json!(r.lhs_count),
        json!(r.rhs_count),
        r.pass,
    ))
}

pub fn commute_record(m: u64, n: u64) -> CheckRecord {
    let ok = hecke_commute(m, n);
    CheckRecord::new(format!("hecke-commute/{m}-{n}"), "hecke-commute", json!({"m": m, "n": n}), json!(ok), json!(true), ok)
}

pub fn functor_hecke_records(id: &str, inputs: Value, m_set: &FinGSet, g: &FiniteGroup, m: u64, n: u64, ctx: &Context) -> Result<Vec<CheckRecord>> {
    let r = verify_functor_hecke(m_set, g, m, n, ctx)?;
    let inputs = json!({"case": inputs, "m": m, "n": n});
    Ok(vec![
        CheckRecord::equal(
            format!("{id}/functor-hecke"),
            "functor-hecke",
            json!({"case": inputs.clone(), "rhs_terms": r.rhs_terms}),
            json!(r.lhs),
            json!(r.rhs),
        ),
        CheckRecord::new(format!("{id}/deck-triviality"), "deck-triviality", inputs, json!(r.deck_trivial), json!(true), r.deck_trivial),
    ])
}

pub fn series_terms(s: &PQYSeries) -> Value {
    Value::Array(s.terms().iter().map(|(a, b, k, c)| json!([a, b, k, ratio_string(c)])).collect())
}

pub fn dmvv_records(id: &str, inputs: Value, c: &CoeffTable, p: usize, q: usize, y: i64) -> Result<Vec<CheckRecord>> {
    let r = DmvvComparison::run(c, p, q, y)?;
    let lhs = series_terms(&crate::series::dmvv_product(c, p, q, y)?);
    let rhs = series_terms(&crate::series::dmvv_exp(c, p, q, y)?);
    let inputs = json!({"coeffs": inputs, "p": p, "q": q, "y": y});
    Ok(vec![
        CheckRecord::equal(format!("{id}/dmvv"), "dmvv-product-exp", inputs.clone(), lhs, rhs),
        CheckRecord::new(format!("{id}/integrality"), "dmvv-integrality", inputs, json!(r.integral), json!(true), r.integral),
    ])
}

/// Number of index-n subgroups of the free group of rank k, by the
/// recursion `a_n = n (n!)^{k-1} - sum_{i<n} ((n-i)!)^{k-1} a_i`.
pub fn hall_count(k: u32, n: usize) -> u128 {
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    let mut a: Vec<u128> = vec![0];
    for m in 1..=n {
        let sub: u128 = (1..m).map(|i| fact(m - i).pow(k - 1) * a[i]).sum();
        a.push(m as u128 * fact(m).pow(k - 1) - sub);
    }
    a[n]
}

fn named(g: &str, m: &str, gamma: &str) -> Value {
    json!({"group": g, "gset": m, "gamma": gamma})
}

/// The full suite at desk-scale parameters.
pub fn all_records(ctx: &Context) -> Result<Vec<CheckRecord>> {
    let trivial = FiniteGroup::trivial();
    let z2 = FiniteGroup::cyclic(2)?;
    let s3 = FiniteGroup::symmetric(3)?;
    let z = GammaSpec::free_abelian(1);
    let za = GammaSpec::free_abelian(2);
    let f2 = GammaSpec::free(2);
    let mut out = vec![];

    let opts = TheoremCOptions { limits: GroupLimits { max_order: 4_000_000, ..GroupLimits::default() }, ..TheoremCOptions::default() };
    let cases: [(&str, &FiniteGroup, &str, &GammaSpec, &str, usize); 8] = [
        ("trivial", &trivial, "point", &z, "z", 10),
        ("z2", &z2, "point", &z, "z", 4),
        ("z2", &z2, "regular", &z, "z", 4),
        ("s3", &s3, "point", &z, "z", 4),
        ("s3", &s3, "point", &za, "z2", 3),
        ("z2", &z2, "regular", &za, "z2", 3),
        ("z2", &z2, "point", &f2, "f2", 3),
        ("s3", &s3, "point", &f2, "f2", 2),
    ];
    for (gn, g, mn, gamma, gam, nmax) in cases {
        let m = crate::fixtures::gset(mn, g)?;
        out.extend(theorem_c_records(&format!("theorem-c/{gn}-{mn}-{gam}"), named(gn, mn, gam), &m, g, gamma, nmax, &opts, ctx)?);
    }

    for (gn, g) in [("z2", &z2), ("s3", &s3)] {
        for mn in ["point", "regular"] {
            let m = crate::fixtures::gset(mn, g)?;
            for (gam, gamma, nmax) in [("z2", &za, 4), ("f2", &f2, 3)] {
                for n in 1..=nmax {
                    for (i, h) in enumerate_subgroup_classes(gamma, n, ctx)?.iter().enumerate() {
                        let c = chi_gamma_set(&m, g, h, ctx)?;
                        out.push(CheckRecord::equal(
                            format!("set-chi/{gn}-{mn}-{gam}/{n}.{i}"),
                            "set-chi-presentations",
                            json!({"case": named(gn, mn, gam), "index": n, "class": i}),
                            json!(c.by_isotropy),
                            json!(c.by_pairs),
                        ));
                    }
                }
            }
        }
    }

    for (gn, g) in [("z2", &z2), ("s3", &s3)] {
        for (gam, gamma, policy) in [("z", &z, SamplingPolicy::ClassRepresentatives), ("z2", &za, SamplingPolicy::Exhaustive)] {
            for n in 1..=3 {
                let r = verify_centralizer(gamma, g, n, policy, &GroupLimits::default(), ctx)?;
                out.extend(centralizer_records(&format!("centralizer/{gn}-{gam}-{n}"), json!({"group": gn, "gamma": gam, "n": n}), &r));
            }
        }
    }
    for n in 1..=6 {
        let r = verify_centralizer(&z, &trivial, n, SamplingPolicy::Exhaustive, &GroupLimits::default(), ctx)?;
        out.extend(centralizer_records(&format!("centralizer/trivial-z-{n}"), json!({"group": "trivial", "gamma": "z", "n": n}), &r));
    }

    for m in 1..=10 {
        for n in 1..=10 {
            out.push(lattice_hecke_record(m, n)?);
        }
    }
    for m in 1..=8 {
        for n in 1..=8 {
            out.push(commute_record(m, n));
        }
    }
    let z2sum = LatticeSum::ambient(2);
    let counts: Vec<u64> = (1..=50).map(|n| z2sum.hecke_t(n).count()).collect();
    let sig: Vec<u64> = (1..=50).map(sigma1).collect();
    out.push(CheckRecord::equal("sublattice-count/1-50", "sublattice-count", json!({"n_max": 50}), json!(counts), json!(sig)));

    for (gn, g, mn) in [("trivial", &trivial, "point"), ("z2", &z2, "regular"), ("s3", &s3, "point")] {
        let m = crate::fixtures::gset(mn, g)?;
        for a in 1..=4 {
            for b in 1..=4 {
                out.extend(functor_hecke_records(&format!("hecke-functor/{gn}-{mn}/{a}-{b}"), json!({"group": gn, "gset": mn}), &m, g, a, b, ctx)?);
            }
        }
    }

    let (p, q, y) = (4, 3, 2);
    let window = crate::series::min_m_window(p, q);
    for seed in 0..20 {
        let c = CoeffTable::random(seed, window, y, 3);
        out.extend(dmvv_records(&format!("dmvv/random-{seed}"), json!(format!("random-{seed}")), &c, p, q, y)?);
    }
    let c = CoeffTable::new(window, y, [((0, 0), 1)])?;
    out.extend(dmvv_records("dmvv/partition", json!("partition"), &c, p, q, y)?);

    let lattice_counts: Vec<u64> = (1..=50).map(|n| SublatticeHNF::enumerate(2, n).len() as u64).collect();
    out.push(CheckRecord::equal("subgroups/z2-sigma", "subgroup-count", json!({"gamma": "z2", "n_max": 50}), json!(lattice_counts), json!(sig)));
    for k in 1..=3u32 {
        let counts = (1..=6)
            .map(|n| Ok(enumerate_subgroups(&GammaSpec::free(k as usize), n, ctx)?.subgroups as u128))
            .collect::<Result<Vec<_>>>()?;
        let hall: Vec<u128> = (1..=6).map(|n| hall_count(k, n)).collect();
        out.push(CheckRecord::equal(format!("subgroups/f{k}-hall"), "subgroup-count", json!({"gamma": format!("f{k}"), "n_max": 6}), json!(counts), json!(hall)));
    }

    let pt = FinGSet::point(&s3);
    for (gam, gamma, want) in [("z", &z, 3), ("z2", &za, 8), ("f2", &f2, 11)] {
        out.push(CheckRecord::equal(format!("scalar/chi-{gam}-s3"), "scalar-fixture", named("s3", "point", gam), json!(chi_gamma(&pt, &s3, gamma, ctx)?), json!(want)));
    }
    out.push(CheckRecord::equal(
        "scalar/f2-index-2-classes",
        "scalar-fixture",
        json!({"gamma": "f2", "index": 2}),
        json!(enumerate_subgroup_classes(&f2, 2, ctx)?.len()),
        json!(3),
    ));
    out.push(CheckRecord::equal(
        "scalar/t2t2-count",
        "scalar-fixture",
        json!({"m": 2, "n": 2}),
        json!(z2sum.hecke_t(2).hecke_t(2).count()),
        json!(z2sum.hecke_t(4).count() + 2 * z2sum.hecke_t(1).scale_r(2).count()),
    ));
    Ok(out)
}
