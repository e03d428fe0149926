use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coefficients `c(m, k)` for `0 <= m <= m_max`, `|k| <= k_abs`.
///
/// Entries outside the declared `k` range are zero; asking for `m` beyond
/// `m_max` is an error, since the table carries no information there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    m_max: i64,
    k_abs: i64,
    entries: BTreeMap<(i64, i64), i64>,
}

#[derive(Serialize, Deserialize)]
struct Window {
    m_max: i64,
    k_abs: i64,
}

#[derive(Serialize, Deserialize)]
struct Json {
    window: Window,
    entries: Vec<(i64, i64, i64)>,
}

impl CoeffTable {
    pub fn new(m_max: i64, k_abs: i64, entries: impl IntoIterator<Item = ((i64, i64), i64)>) -> Result<Self> {
        if m_max < 0 || k_abs < 0 {
            return Err(Error::Input("coefficient window bounds must be nonnegative".into()));
        }
        let mut map = BTreeMap::new();
        for ((m, k), c) in entries {
            if !(0..=m_max).contains(&m) || k.abs() > k_abs {
                return Err(Error::Input(format!("entry ({m}, {k}) outside the declared window")));
            }
            if c != 0 {
                *map.entry((m, k)).or_insert(0) += c;
            }
        }
        map.retain(|_, c| *c != 0);
        Ok(CoeffTable { m_max, k_abs, entries: map })
    }

    /// Uniform entries in `-bound..=bound` over the whole window.
    pub fn random(seed: u64, m_max: i64, k_abs: i64, bound: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = vec![];
        for m in 0..=m_max {
            for k in -k_abs..=k_abs {
                entries.push(((m, k), rng.gen_range(-bound..=bound)));
            }
        }
        CoeffTable::new(m_max, k_abs, entries).expect("entries lie in the window")
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn k_abs(&self) -> i64 {
        self.k_abs
    }

    pub fn get(&self, m: i64, k: i64) -> Result<i64> {
        if m > self.m_max {
            return Err(Error::InsufficientWindow(format!(
                "c({m}, {k}) requested but m_max = {}",
                self.m_max
            )));
        }
        Ok(self.entries.get(&(m, k)).copied().unwrap_or(0))
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.entries.iter().map(|(&(m, k), &c)| (m, k, c))
    }

    /// Largest `|k|` carrying a nonzero entry.
    pub fn k_support(&self) -> i64 {
        self.entries.keys().map(|(_, k)| k.abs()).max().unwrap_or(0)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: Json = serde_json::from_str(s).map_err(|e| Error::Input(format!("coefficient table: {e}")))?;
        CoeffTable::new(j.window.m_max, j.window.k_abs, j.entries.into_iter().map(|(m, k, c)| ((m, k), c)))
    }

    pub fn to_json(&self) -> String {
        let j = Json {
            window: Window { m_max: self.m_max, k_abs: self.k_abs },
            entries: self.entries().collect(),
        };
        serde_json::to_string(&j).expect("plain data serializes")
    }
}
