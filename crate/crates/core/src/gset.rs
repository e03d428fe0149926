//! Finite G-sets with a full action table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::par::Budget;

/// JSON form: rows indexed by group element, each row the image of every point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSetSpec {
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGSet {
    group_order: usize,
    size: usize,
    action: Vec<u32>,
}

impl FinGSet {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    #[inline]
    pub fn act(&self, g: Elem, x: usize) -> usize {
        self.action[g * self.size + x] as usize
    }

    pub fn point(g: &FiniteGroup) -> Self {
        FinGSet {
            group_order: g.order(),
            size: 1,
            action: vec![0; g.order()],
        }
    }

    /// Left multiplication on the group itself.
    pub fn regular(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut action = Vec::with_capacity(n * n);
        for a in g.elements() {
            action.extend(g.elements().map(|x| g.mul(a, x) as u32));
        }
        FinGSet { group_order: n, size: n, action }
    }

    /// The defining permutation action, if the group has one.
    pub fn natural(g: &FiniteGroup) -> Result<Self> {
        let rep = g
            .perm_rep()
            .ok_or_else(|| Error::InvalidGSet("group has no permutation representation".into()))?;
        let action = rep.images.iter().flatten().copied().collect();
        Ok(FinGSet { group_order: g.order(), size: rep.degree, action })
    }

    pub fn from_table(g: &FiniteGroup, size: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != g.order() {
            return Err(Error::InvalidGSet(format!(
                "expected {} rows, got {}",
                g.order(),
                rows.len()
            )));
        }
        let mut action = Vec::with_capacity(size * rows.len());
        for (a, row) in rows.iter().enumerate() {
            if row.len() != size || row.iter().any(|&x| x >= size) {
                return Err(Error::InvalidGSet(format!("row {a} is not a map on {size} points")));
            }
            action.extend(row.iter().map(|&x| x as u32));
        }
        let m = FinGSet { group_order: g.order(), size, action };
        m.validate(g)?;
        Ok(m)
    }

    pub fn from_spec(g: &FiniteGroup, spec: &GSetSpec) -> Result<Self> {
        FinGSet::from_table(g, spec.size, spec.action.clone())
    }

    pub fn to_spec(&self) -> GSetSpec {
        GSetSpec {
            size: self.size,
            action: self
                .action
                .chunks(self.size.max(1))
                .map(|r| r.iter().map(|&x| x as usize).collect())
                .collect(),
        }
    }

    /// Exhaustive check of `e·x = x` and `(gh)·x = g·(h·x)`.
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        if self.group_order != g.order() {
            return Err(Error::InvalidGSet("group order mismatch".into()));
        }
        for x in 0..self.size {
            if self.act(g.identity(), x) != x {
                return Err(Error::InvalidGSet(format!("identity moves point {x}")));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for x in 0..self.size {
                    if self.act(ab, x) != self.act(a, self.act(b, x)) {
                        return Err(Error::InvalidGSet(format!(
                            "action law fails for ({a},{b}) at {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Disjoint union of two G-sets for the same group.
    pub fn disjoint_union(&self, other: &FinGSet) -> Result<Self> {
        if self.group_order != other.group_order {
            return Err(Error::InvalidGSet("group order mismatch".into()));
        }
        let size = self.size + other.size;
        let mut action = Vec::with_capacity(size * self.group_order);
        for a in 0..self.group_order {
            action.extend((0..self.size).map(|x| self.act(a, x) as u32));
            action.extend((0..other.size).map(|x| (self.size + other.act(a, x)) as u32));
        }
        Ok(FinGSet { group_order: self.group_order, size, action })
    }

    /// `M^n` as a `G ≀ S_n`-set, points encoded as `sum_i x_i |M|^i`.
    pub fn wreath_power(&self, gn: &FiniteGroup, budget: &Budget) -> Result<Self> {
        let info = gn
            .wreath_info()
            .ok_or_else(|| Error::InvalidGSet("not a wreath product".into()))?;
        if info.base.order() != self.group_order {
            return Err(Error::InvalidGSet("base group order mismatch".into()));
        }
        let n = info.n;
        let size = self
            .size
            .checked_pow(n as u32)
            .ok_or_else(|| Error::BudgetExceeded { stage: "wreath power".into() })?;
        budget.check_count("wreath power", size.saturating_mul(gn.order()), budget.max_action_entries)?;
        let m = self.size;
        let decode = |mut c: usize| -> Vec<usize> {
            (0..n)
                .map(|_| {
                    let d = c % m;
                    c /= m;
                    d
                })
                .collect()
        };
        let encode = |x: &[usize]| x.iter().rev().fold(0, |acc, &d| acc * m + d);
        let points: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let mut action = Vec::with_capacity(size * gn.order());
        for a in gn.elements() {
            let w = info.decode(a);
            for x in &points {
                action.push(encode(&crate::group::wreath_action(&w, x, self)) as u32);
            }
        }
        Ok(FinGSet { group_order: gn.order(), size, action })
    }
}
