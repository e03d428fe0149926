//! The domain group Γ: free abelian, free, or finitely presented, plus words
//! in its generators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

/// A word in signed generator indices: `+i` is generator `i` (1-based),
/// `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn empty() -> Self {
        Word(vec![])
    }

    pub fn letter(gen: usize, inverse: bool) -> Self {
        let l = gen as i32 + 1;
        Word(vec![if inverse { -l } else { l }])
    }

    /// `g_gen^e` for a 0-based generator index.
    pub fn power(gen: usize, e: i64) -> Self {
        let l = gen as i32 + 1;
        let l = if e < 0 { -l } else { l };
        Word(vec![l; e.unsigned_abs() as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exponent sum per generator (the image in the abelianization).
    pub fn exponent_vector(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Substitutes a word for each generator.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = vec![];
        for &l in &self.0 {
            let w = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend_from_slice(&w.0);
            } else {
                out.extend(w.0.iter().rev().map(|&x| -x));
            }
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("g{l}")
                } else {
                    format!("g{}^-1", -l)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GammaSpec {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    Presented { rank: usize, relators: Vec<Word> },
}

impl GammaSpec {
    pub fn free_abelian(rank: usize) -> Self {
        GammaSpec::FreeAbelian { rank }
    }

    pub fn free(rank: usize) -> Self {
        GammaSpec::Free { rank }
    }

    /// Stores relators freely reduced; rejects those that reduce to nothing.
    pub fn presented(rank: usize, relators: Vec<Word>) -> Result<Self> {
        let relators = relators.iter().map(Word::free_reduce).collect();
        let g = GammaSpec::Presented { rank, relators };
        g.validate()?;
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        match self {
            GammaSpec::FreeAbelian { rank } | GammaSpec::Free { rank } | GammaSpec::Presented { rank, .. } => *rank,
        }
    }

    pub fn is_abelian_kind(&self) -> bool {
        matches!(self, GammaSpec::FreeAbelian { .. })
            || matches!(self, GammaSpec::Free { rank: 1 })
    }

    pub fn validate(&self) -> Result<()> {
        let rank = self.rank();
        if rank == 0 {
            return Err(Error::InvalidPresentation("rank must be at least 1".into()));
        }
        if let GammaSpec::Presented { relators, .. } = self {
            for r in relators {
                if r.is_empty() {
                    return Err(Error::InvalidPresentation("empty relator".into()));
                }
                if !r.is_reduced() {
                    return Err(Error::InvalidPresentation(format!("relator {r} is not freely reduced")));
                }
                if let Some(&bad) = r.0.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > rank) {
                    return Err(Error::IndexOutOfRange { index: bad as i64, rank });
                }
            }
        }
        Ok(())
    }

    /// Defining relators; commutators for the free abelian kind.
    pub fn relators(&self) -> Vec<Word> {
        match self {
            GammaSpec::Free { .. } => vec![],
            GammaSpec::Presented { relators, .. } => relators.clone(),
            GammaSpec::FreeAbelian { rank } => {
                let mut out = vec![];
                for i in 1..=*rank as i32 {
                    for j in i + 1..=*rank as i32 {
                        out.push(Word(vec![i, j, -i, -j]));
                    }
                }
                out
            }
        }
    }

    /// The same group written as an explicit presentation.
    pub fn as_presented(&self) -> GammaSpec {
        GammaSpec::Presented { rank: self.rank(), relators: self.relators() }
    }
}

/// Product of the images along `w`; the empty word gives the identity.
pub fn evaluate_word(w: &Word, images: &[Elem], g: &FiniteGroup) -> Result<Elem> {
    let mut acc = g.identity();
    for &l in &w.0 {
        let i = l.unsigned_abs() as usize;
        if l == 0 || i > images.len() {
            return Err(Error::IndexOutOfRange { index: l as i64, rank: images.len() });
        }
        let x = images[i - 1];
        acc = g.mul(acc, if l > 0 { x } else { g.inv(x) });
    }
    Ok(acc)
}

/// Whether the generator images define a homomorphism Γ → G.
pub fn is_hom(images: &[Elem], gamma: &GammaSpec, g: &FiniteGroup) -> bool {
    if images.len() != gamma.rank() {
        return false;
    }
    match gamma {
        GammaSpec::Free { .. } => true,
        GammaSpec::FreeAbelian { .. } => images
            .iter()
            .enumerate()
            .all(|(i, &a)| images[i + 1..].iter().all(|&b| g.commute(a, b))),
        GammaSpec::Presented { relators, .. } => relators
            .iter()
            .all(|r| evaluate_word(r, images, g).map(|x| x == g.identity()).unwrap_or(false)),
    }
}
