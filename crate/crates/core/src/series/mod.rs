//! Exact truncated power series: one variable `p` over the rationals, and
//! `(p, q, y)` with `y` a Laurent window `[-Y, Y]`.

mod coeffs;
mod dmvv;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
pub use coeffs::CoeffTable;
pub use dmvv::{dmvv_exp, dmvv_product, jacobi_hecke, min_m_window, DmvvComparison};

pub(crate) fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficient-wise text form: integers plainly, others as `a/b`.
pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `c_0 + c_1 p + ... + c_N p^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSeries {
    coeffs: Vec<BigRational>,
}

impl PSeries {
    pub fn zero(n: usize) -> Self {
        PSeries { coeffs: vec![BigRational::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        let mut s = PSeries::zero(n);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The given integer coefficients, zero-padded or cut to degree `n`.
    pub fn from_ints(c: &[i64], n: usize) -> Self {
        let mut s = PSeries::zero(n);
        for (i, &x) in c.iter().take(n + 1).enumerate() {
            s.coeffs[i] = ratio(x);
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, o: &PSeries) -> PSeries {
        let n = self.truncation().min(o.truncation());
        PSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect() }
    }

    pub fn mul(&self, o: &PSeries) -> PSeries {
        let n = self.truncation().min(o.truncation());
        let mut out = PSeries::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Requires a zero constant term.
    pub fn exp(&self) -> Result<PSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("exp needs a zero constant term".into()));
        }
        let n = self.truncation();
        let mut e = PSeries::one(n);
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += ratio(j as i64) * &self.coeffs[j] * &e.coeffs[k - j];
            }
            e.coeffs[k] = acc / ratio(k as i64);
        }
        Ok(e)
    }

    /// Requires constant term 1.
    pub fn log(&self) -> Result<PSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesPrecondition("log needs constant term 1".into()));
        }
        let n = self.truncation();
        let mut l = PSeries::zero(n);
        for k in 1..=n {
            let mut acc = ratio(k as i64) * &self.coeffs[k];
            for j in 1..k {
                acc -= ratio(j as i64) * &l.coeffs[j] * &self.coeffs[k - j];
            }
            l.coeffs[k] = acc / ratio(k as i64);
        }
        Ok(l)
    }

    /// `(1 - p^r)^{-c}` through degree `n`, for any integer `c`.
    pub fn geom_power(r: usize, c: &BigInt, n: usize) -> PSeries {
        let mut s = PSeries::zero(n);
        let c = BigRational::from_integer(c.clone());
        let mut term = BigRational::one();
        let mut j = 0usize;
        while j * r <= n {
            s.coeffs[j * r] = term.clone();
            term = term * (&c + ratio(j as i64)) / ratio(j as i64 + 1);
            j += 1;
            if r == 0 {
                break;
            }
        }
        s
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ratio_string).collect()
    }
}

/// `sum_k |SP^k(X)| t^k = (1 - t)^{-|X|}`.
pub fn symmetric_product_series(x: u64, n: usize) -> PSeries {
    PSeries::geom_power(1, &BigInt::from(x), n)
}

/// Dense series in `p^a q^b y^k`, `a <= P`, `b <= Q`, `|k| <= Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQYSeries {
    pub p_max: usize,
    pub q_max: usize,
    pub y_abs: i64,
    data: Vec<BigRational>,
}

impl PQYSeries {
    pub fn zero(p_max: usize, q_max: usize, y_abs: i64) -> Self {
        let len = (p_max + 1) * (q_max + 1) * (2 * y_abs as usize + 1);
        PQYSeries { p_max, q_max, y_abs, data: vec![BigRational::zero(); len] }
    }

    pub fn one(p_max: usize, q_max: usize, y_abs: i64) -> Self {
        let mut s = PQYSeries::zero(p_max, q_max, y_abs);
        s.set(0, 0, 0, BigRational::one());
        s
    }

    fn slice_len(&self) -> usize {
        (self.q_max + 1) * (2 * self.y_abs as usize + 1)
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, k: i64) -> usize {
        (a * (self.q_max + 1) + b) * (2 * self.y_abs as usize + 1) + (k + self.y_abs) as usize
    }

    pub fn in_window(&self, a: usize, b: usize, k: i64) -> bool {
        a <= self.p_max && b <= self.q_max && k.abs() <= self.y_abs
    }

    /// Zero outside the window.
    pub fn get(&self, a: usize, b: usize, k: i64) -> BigRational {
        if self.in_window(a, b, k) {
            self.data[self.idx(a, b, k)].clone()
        } else {
            BigRational::zero()
        }
    }

    pub fn set(&mut self, a: usize, b: usize, k: i64, v: BigRational) {
        let i = self.idx(a, b, k);
        self.data[i] = v;
    }

    pub fn add_at(&mut self, a: usize, b: usize, k: i64, v: &BigRational) {
        let i = self.idx(a, b, k);
        self.data[i] += v;
    }

    /// Nonzero terms as `(p-degree, q-degree, y-exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, usize, i64, BigRational)> {
        let mut out = vec![];
        for a in 0..=self.p_max {
            for b in 0..=self.q_max {
                for k in -self.y_abs..=self.y_abs {
                    let v = &self.data[self.idx(a, b, k)];
                    if !v.is_zero() {
                        out.push((a, b, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Product, discarding monomials outside this series' window.
    pub fn mul(&self, o: &PQYSeries) -> PQYSeries {
        let mut out = PQYSeries::zero(self.p_max, self.q_max, self.y_abs);
        let ot = o.terms();
        for (a, b, k, v) in self.terms() {
            for (c, d, l, w) in &ot {
                if out.in_window(a + c, b + d, k + l) {
                    out.add_at(a + c, b + d, k + l, &(&v * w));
                }
            }
        }
        out
    }

    /// Multiplies by `(1 - p^a q^b y^k)^{-c}`, which has few terms.
    pub fn mul_geom(&self, a: usize, b: usize, k: i64, c: &BigInt) -> PQYSeries {
        let c = BigRational::from_integer(c.clone());
        let mut factor = vec![];
        let mut term = BigRational::one();
        let mut j = 0usize;
        while j * a <= self.p_max && j * b <= self.q_max && (j as i64 * k).abs() <= self.y_abs {
            factor.push((j * a, j * b, j as i64 * k, term.clone()));
            term = term * (&c + ratio(j as i64)) / ratio(j as i64 + 1);
            j += 1;
            if a == 0 && b == 0 && k == 0 {
                break;
            }
        }
        let mut out = PQYSeries::zero(self.p_max, self.q_max, self.y_abs);
        for (x, y, z, v) in self.terms() {
            for (dx, dy, dz, w) in &factor {
                if out.in_window(x + dx, y + dy, z + dz) {
                    out.add_at(x + dx, y + dy, z + dz, &(&v * w));
                }
            }
        }
        out
    }

    fn slice(&self, a: usize) -> &[BigRational] {
        let l = self.slice_len();
        &self.data[a * l..(a + 1) * l]
    }

    fn slice_mul(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let w = 2 * self.y_abs as usize + 1;
        let mut out = vec![BigRational::zero(); self.slice_len()];
        for (i, u) in x.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
            let (b, k) = (i / w, (i % w) as i64 - self.y_abs);
            for (j, v) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let (d, l) = (j / w, (j % w) as i64 - self.y_abs);
                if b + d <= self.q_max && (k + l).abs() <= self.y_abs {
                    out[(b + d) * w + (k + l + self.y_abs) as usize] += u * v;
                }
            }
        }
        out
    }

    fn with_slices(&self, slices: Vec<Vec<BigRational>>) -> PQYSeries {
        PQYSeries { p_max: self.p_max, q_max: self.q_max, y_abs: self.y_abs, data: slices.concat() }
    }

    /// Exponential in the `p`-grading; the `p^0` slice must vanish.
    pub fn exp(&self) -> Result<PQYSeries> {
        if self.slice(0).iter().any(|v| !v.is_zero()) {
            return Err(Error::SeriesPrecondition("exp needs a zero p^0 part".into()));
        }
        let mut e: Vec<Vec<BigRational>> = vec![PQYSeries::one(0, self.q_max, self.y_abs).data];
        for n in 1..=self.p_max {
            let mut acc = vec![BigRational::zero(); self.slice_len()];
            for j in 1..=n {
                let prod = self.slice_mul(self.slice(j), &e[n - j]);
                let jr = ratio(j as i64);
                for (a, b) in acc.iter_mut().zip(prod) {
                    *a += &jr * b;
                }
            }
            let nr = ratio(n as i64);
            e.push(acc.into_iter().map(|v| v / &nr).collect());
        }
        Ok(self.with_slices(e))
    }

    /// Logarithm in the `p`-grading; the `p^0` slice must be exactly 1.
    pub fn log(&self) -> Result<PQYSeries> {
        if self.slice(0) != PQYSeries::one(0, self.q_max, self.y_abs).data.as_slice() {
            return Err(Error::SeriesPrecondition("log needs p^0 part equal to 1".into()));
        }
        let mut l: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); self.slice_len()]];
        for n in 1..=self.p_max {
            let nr = ratio(n as i64);
            let mut acc: Vec<BigRational> = self.slice(n).iter().map(|v| v * &nr).collect();
            for j in 1..n {
                let prod = self.slice_mul(&l[j], self.slice(n - j));
                let jr = ratio(j as i64);
                for (a, b) in acc.iter_mut().zip(prod) {
                    *a -= &jr * b;
                }
            }
            l.push(acc.into_iter().map(|v| v / &nr).collect());
        }
        Ok(self.with_slices(l))
    }

    /// The same series on a smaller `y` window.
    pub fn restrict_y(&self, y_abs: i64) -> PQYSeries {
        let mut out = PQYSeries::zero(self.p_max, self.q_max, y_abs);
        for (a, b, k, v) in self.terms() {
            if k.abs() <= y_abs {
                out.set(a, b, k, v);
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
    }
}
