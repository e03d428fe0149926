//! Named inputs for the command line, with JSON files as the fallback.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::group::{build_group_with, FiniteGroup, GroupLimits, GroupSpec};
use crate::gset::{FinGSet, GSetSpec};
use crate::presentation::GammaSpec;
use crate::series::CoeffTable;

fn read_json<T: DeserializeOwned>(path: &str, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {what} file {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{path}: {e}")))
}

fn read_text(path: &str, what: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {what} file {path}: {e}")))
}

fn unknown(what: &str, name: &str, known: &str) -> Error {
    Error::Input(format!("unknown {what} `{name}`: expected {known} or a JSON file"))
}

fn suffix_number(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|s| s.parse().ok())
}

/// `trivial`, `zN` (cyclic), `sN` (symmetric), `v4`, or a group JSON file.
pub fn group_spec(name: &str) -> Result<GroupSpec> {
    if name == "trivial" {
        return Ok(GroupSpec::Trivial);
    }
    if name == "v4" {
        return Ok(GroupSpec::Product { factors: vec![GroupSpec::Cyclic { n: 2 }, GroupSpec::Cyclic { n: 2 }] });
    }
    if let Some(n) = suffix_number(name, "z") {
        return Ok(GroupSpec::Cyclic { n });
    }
    if let Some(n) = suffix_number(name, "s") {
        return Ok(GroupSpec::Symmetric { n });
    }
    if Path::new(name).is_file() {
        return read_json(name, "group");
    }
    Err(unknown("group", name, "trivial, zN, sN, v4"))
}

pub fn group(name: &str, limits: &GroupLimits) -> Result<FiniteGroup> {
    build_group_with(&group_spec(name)?, limits)
}

/// `z`, `zN` (free abelian), `free-abelian-N`, `free-N`, `fN`, or a JSON file.
pub fn gamma(name: &str) -> Result<GammaSpec> {
    let spec = if name == "z" {
        GammaSpec::free_abelian(1)
    } else if let Some(n) = suffix_number(name, "free-abelian-").or_else(|| suffix_number(name, "z")) {
        GammaSpec::free_abelian(n)
    } else if let Some(n) = suffix_number(name, "free-").or_else(|| suffix_number(name, "f")) {
        GammaSpec::free(n)
    } else if Path::new(name).is_file() {
        read_json(name, "Γ")?
    } else {
        return Err(unknown("Γ", name, "z, zN, free-abelian-N, free-N, fN"));
    };
    spec.validate()?;
    Ok(spec)
}

/// `point`, `regular`, `natural`, or a G-set JSON file.
pub fn gset(name: &str, g: &FiniteGroup) -> Result<FinGSet> {
    match name {
        "point" | "pt" => Ok(FinGSet::point(g)),
        "regular" => Ok(FinGSet::regular(g)),
        "natural" => FinGSet::natural(g),
        _ if Path::new(name).is_file() => FinGSet::from_spec(g, &read_json::<GSetSpec>(name, "G-set")?),
        _ => Err(unknown("G-set", name, "point, regular, natural")),
    }
}

/// `zero`, `partition` (only `c(0,0) = 1`), `random-SEED`, or a JSON file.
/// Named tables are built on the window `(m_max, k_abs)`.
pub fn coeffs(name: &str, m_max: i64, k_abs: i64) -> Result<CoeffTable> {
    match name {
        "zero" => CoeffTable::new(m_max, k_abs, []),
        "partition" => CoeffTable::new(m_max, k_abs, [((0, 0), 1)]),
        _ => {
            if let Some(seed) = name.strip_prefix("random-").and_then(|s| s.parse().ok()) {
                Ok(CoeffTable::random(seed, m_max, k_abs, 3))
            } else if Path::new(name).is_file() {
                CoeffTable::from_json(&read_text(name, "coefficient")?).map_err(|e| Error::Input(format!("{name}: {e}")))
            } else {
                Err(unknown("coefficient table", name, "zero, partition, random-SEED"))
            }
        }
    }
}
