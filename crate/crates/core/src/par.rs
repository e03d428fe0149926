//! Execution policy and budgets shared by the enumeration routines.
//!
//! Every parallel loop in the crate goes through [`Exec`], so the same code
//! path runs sequentially when the `parallel` feature is disabled or when a
//! caller asks for [`Exec::Sequential`] explicitly. Output order never
//! depends on the policy.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential execution without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn try_map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    pub fn try_map_range<R, F>(self, n: usize, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(usize) -> Result<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

/// Soft wall-clock limit plus hard caps on the sizes of enumerated sets.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    deadline: Option<Instant>,
    /// Maximum number of homomorphisms materialized by one enumeration.
    pub max_homs: usize,
    /// Maximum number of coset tables visited by one subgroup search.
    pub max_tables: usize,
    /// Maximum number of entries in a G-set action table.
    pub max_action_entries: usize,
}

pub const DEFAULT_BUDGET_SECS: u64 = 300;

impl Default for Budget {
    fn default() -> Self {
        Budget::with_secs(Some(DEFAULT_BUDGET_SECS))
    }
}

impl Budget {
    pub fn with_secs(secs: Option<u64>) -> Self {
        Budget {
            deadline: secs.map(|s| Instant::now() + Duration::from_secs(s)),
            max_homs: 20_000_000,
            max_tables: 50_000_000,
            max_action_entries: 100_000_000,
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            deadline: None,
            max_homs: usize::MAX,
            max_tables: usize::MAX,
            max_action_entries: usize::MAX,
        }
    }

    pub fn check(&self, stage: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded {
                stage: stage.to_string(),
            }),
            _ => Ok(()),
        }
    }

    pub fn check_count(&self, stage: &str, count: usize, cap: usize) -> Result<()> {
        if count > cap {
            return Err(Error::BudgetExceeded {
                stage: format!("{stage} ({count} > {cap})"),
            });
        }
        self.check(stage)
    }
}

/// Execution policy and budget handed to every enumeration-heavy operation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Context {
    pub exec: Exec,
    pub budget: Budget,
}

impl Context {
    pub fn sequential() -> Self {
        Context {
            exec: Exec::Sequential,
            budget: Budget::default(),
        }
    }

    pub fn with_exec(exec: Exec) -> Self {
        Context {
            exec,
            budget: Budget::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_under_both_policies() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(&xs, |x| x * x);
        let b = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn expired_budget_reports_stage() {
        let b = Budget::with_secs(Some(0));
        std::thread::sleep(Duration::from_millis(5));
        assert_eq!(
            b.check("homs"),
            Err(Error::BudgetExceeded { stage: "homs".into() })
        );
        assert!(b.check_count("x", 10, 5).is_err());
    }
}
