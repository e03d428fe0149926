//! The Jacobi Hecke operators and both sides of the DMVV identity.
//!
//! Truncating `y` is not multiplicative (negative and positive exponents can
//! cancel back into the window), so both sides are computed on the window
//! `|k| <= max(Y, K P)`, `K` the largest `|k|` in the table, which no product
//! of relevant factors leaves, and only then restricted to `|k| <= Y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{ratio, ratio_string, CoeffTable, PQYSeries};
use crate::error::{Error, Result};

/// Smallest `m_max` a table needs for `dmvv_product`/`dmvv_exp` at `(P, Q)`.
pub fn min_m_window(p: usize, q: usize) -> i64 {
    (p * q) as i64
}

fn check_window(c: &CoeffTable, need: i64, what: &str) -> Result<()> {
    if c.m_max() < need {
        return Err(Error::InsufficientWindow(format!(
            "{what} needs c(m, k) for m <= {need}, table has m_max = {}",
            c.m_max()
        )));
    }
    Ok(())
}

/// `T(r)` applied to `sum c(m,k) q^m y^k`, as the `p^0` part of a series:
/// `sum_{ad=r} (1/a) sum_{m,k} c(md, k) q^{am} y^{ak}`.
pub fn jacobi_hecke(c: &CoeffTable, r: usize, q_max: usize, y_abs: i64) -> Result<PQYSeries> {
    if r == 0 {
        return Err(Error::Input("Hecke index must be positive".into()));
    }
    check_window(c, (q_max * r) as i64, "T(r)")?;
    let mut out = PQYSeries::zero(0, q_max, y_abs);
    for a in (1..=r).filter(|a| r.is_multiple_of(*a)) {
        let d = (r / a) as i64;
        let inv_a = BigRational::new(BigInt::from(1), BigInt::from(a));
        for m in 0..=(q_max / a) as i64 {
            for k in (-c.k_abs())..=c.k_abs() {
                let v = c.get(m * d, k)?;
                let yk = a as i64 * k;
                if v != 0 && yk.abs() <= y_abs {
                    out.add_at(0, a * m as usize, yk, &(ratio(v) * &inv_a));
                }
            }
        }
    }
    Ok(out)
}

fn inner_window(c: &CoeffTable, p_max: usize, y_abs: i64) -> i64 {
    y_abs.max(c.k_support() * p_max as i64)
}

/// `prod_{n>=1, m>=0, k} (1 - p^n q^m y^k)^{-c(nm, k)}` through `(P, Q, Y)`.
pub fn dmvv_product(c: &CoeffTable, p_max: usize, q_max: usize, y_abs: i64) -> Result<PQYSeries> {
    check_window(c, min_m_window(p_max, q_max), "the DMVV product")?;
    let yi = inner_window(c, p_max, y_abs);
    let ks = c.k_support();
    let mut s = PQYSeries::one(p_max, q_max, yi);
    for n in 1..=p_max {
        for m in 0..=q_max {
            for k in -ks..=ks {
                let e = c.get((n * m) as i64, k)?;
                if e != 0 {
                    s = s.mul_geom(n, m, k, &BigInt::from(e));
                }
            }
        }
    }
    Ok(s.restrict_y(y_abs))
}

/// `exp(sum_{r=1}^{P} p^r T(r) c)` through `(P, Q, Y)`; integrality of the
/// result is checked.
pub fn dmvv_exp(c: &CoeffTable, p_max: usize, q_max: usize, y_abs: i64) -> Result<PQYSeries> {
    check_window(c, min_m_window(p_max, q_max), "the Hecke exponential")?;
    let yi = inner_window(c, p_max, y_abs);
    let mut f = PQYSeries::zero(p_max, q_max, yi);
    for r in 1..=p_max {
        for (_, b, k, v) in jacobi_hecke(c, r, q_max, yi)?.terms() {
            f.add_at(r, b, k, &v);
        }
    }
    let e = f.exp()?.restrict_y(y_abs);
    if !e.is_integral() {
        return Err(Error::Internal("Hecke exponential has a non-integral coefficient".into()));
    }
    Ok(e)
}

/// Both sides of the DMVV identity on one table.
#[derive(Debug, Clone, Serialize)]
pub struct DmvvComparison {
    pub p: usize,
    pub q: usize,
    pub y: i64,
    pub terms_compared: usize,
    pub nonzero_terms: usize,
    pub integral: bool,
    pub equal: bool,
    /// First differing monomial `(a, b, k, product side, exp side)`.
    pub first_difference: Option<(usize, usize, i64, String, String)>,
}

impl DmvvComparison {
    pub fn run(c: &CoeffTable, p: usize, q: usize, y: i64) -> Result<Self> {
        let lhs = dmvv_product(c, p, q, y)?;
        let rhs = dmvv_exp(c, p, q, y)?;
        let mut first_difference = None;
        let mut compared = 0;
        'outer: for a in 0..=p {
            for b in 0..=q {
                for k in -y..=y {
                    compared += 1;
                    let (u, v) = (lhs.get(a, b, k), rhs.get(a, b, k));
                    if u != v {
                        first_difference = Some((a, b, k, ratio_string(&u), ratio_string(&v)));
                        break 'outer;
                    }
                }
            }
        }
        Ok(DmvvComparison {
            p,
            q,
            y,
            terms_compared: compared,
            nonzero_terms: lhs.terms().len(),
            integral: lhs.is_integral() && rhs.is_integral(),
            equal: first_difference.is_none(),
            first_difference,
        })
    }
}
