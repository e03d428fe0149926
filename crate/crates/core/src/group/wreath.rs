//! Wreath products `G ≀ S_n` and their action on `n`-tuples.
//!
//! Convention: `((g), s)((h), t) = ((g_i h_{s^-1(i)})_i, s t)` and
//! `(((g), s) · x)_i = g_i · x_{s^-1(i)}`, a left action.

use super::{perm, ComputedLaw, Elem, FiniteGroup, GroupLimits};
use crate::error::{Error, Result};
use crate::gset::FinGSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub base: Vec<Elem>,
    pub perm: Vec<u32>,
}

impl WreathElement {
    pub fn identity(g: &FiniteGroup, n: usize) -> Self {
        WreathElement {
            base: vec![g.identity(); n],
            perm: perm::identity(n),
        }
    }

    pub fn mul(&self, other: &WreathElement, g: &FiniteGroup) -> WreathElement {
        let sinv = perm::inverse(&self.perm);
        let base = self
            .base
            .iter()
            .enumerate()
            .map(|(i, &gi)| g.mul(gi, other.base[sinv[i] as usize]))
            .collect();
        WreathElement {
            base,
            perm: perm::compose(&self.perm, &other.perm),
        }
    }

    pub fn inv(&self, g: &FiniteGroup) -> WreathElement {
        let base = self
            .perm
            .iter()
            .map(|&sj| g.inv(self.base[sj as usize]))
            .collect();
        WreathElement {
            base,
            perm: perm::inverse(&self.perm),
        }
    }
}

/// Structure of a group built by [`wreath_product`]; element `a` encodes
/// `rank(s) * |G|^n + sum_i g_i |G|^i`.
#[derive(Debug, Clone)]
pub struct WreathInfo {
    pub base: FiniteGroup,
    pub n: usize,
    base_pow: usize,
}

impl WreathInfo {
    pub fn encode(&self, w: &WreathElement) -> Elem {
        let m = self.base.order();
        let b = w.base.iter().rev().fold(0, |acc, &g| acc * m + g);
        perm::rank(&w.perm) * self.base_pow + b
    }

    pub fn decode(&self, a: Elem) -> WreathElement {
        let m = self.base.order();
        let mut b = a % self.base_pow;
        let base = (0..self.n)
            .map(|_| {
                let g = b % m;
                b /= m;
                g
            })
            .collect();
        WreathElement {
            base,
            perm: perm::unrank(a / self.base_pow, self.n),
        }
    }
}

struct WreathLaw(WreathInfo);

impl ComputedLaw for WreathLaw {
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (x, y) = (self.0.decode(a), self.0.decode(b));
        self.0.encode(&x.mul(&y, &self.0.base))
    }
    fn inv(&self, a: Elem) -> Elem {
        self.0.encode(&self.0.decode(a).inv(&self.0.base))
    }
}

/// `G ≀ S_n` of order `|G|^n n!`.
pub fn wreath_product(g: &FiniteGroup, n: usize, limits: &GroupLimits) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidGroup("wreath product needs n >= 1".into()));
    }
    let order = (g.order() as u128)
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(perm::factorial(n)))
        .unwrap_or(u128::MAX);
    if order > limits.max_order as u128 {
        return Err(Error::OrderOverflow { order, max: limits.max_order });
    }
    let order = order as usize;
    let info = WreathInfo {
        base: g.clone(),
        n,
        base_pow: g.order().pow(n as u32),
    };
    let identity = info.encode(&WreathElement::identity(g, n));
    let law = WreathLaw(info.clone());
    let inv: Vec<u32> = (0..order).map(|a| law.inv(a) as u32).collect();

    let mut gens = vec![];
    for &s in g.generators() {
        let mut w = WreathElement::identity(g, n);
        w.base[0] = s;
        gens.push(info.encode(&w));
    }
    if n >= 2 {
        let mut w = WreathElement::identity(g, n);
        w.perm.swap(0, 1);
        gens.push(info.encode(&w));
    }
    if n >= 3 {
        let mut w = WreathElement::identity(g, n);
        w.perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        gens.push(info.encode(&w));
    }
    Ok(FiniteGroup::from_computed(order, identity, inv, gens, Box::new(law), limits).with_wreath(info))
}

/// `(w · x)_i = g_i · x_{s^-1(i)}` for `x` a tuple of points of `m`.
pub fn wreath_action(w: &WreathElement, x: &[usize], m: &FinGSet) -> Vec<usize> {
    let sinv = perm::inverse(&w.perm);
    w.base
        .iter()
        .enumerate()
        .map(|(i, &gi)| m.act(gi, x[sinv[i] as usize]))
        .collect()
}
