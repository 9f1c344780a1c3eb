//! Truncated power series, determinants over commutative rings, and two-sided
//! Laurent windows with explicit tail majorants.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cap value meaning "no truncation": the series is an exact polynomial.
pub const EXACT_CAP: usize = usize::MAX;

/// A power series `Σ_{n ≤ cap} c_n z^n`, all higher terms unknown.
///
/// `cap == EXACT_CAP` marks an exact polynomial (used for the ring identities
/// `0` and `1`). Binary operations truncate to the smaller cap.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
    cap: usize,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn new(mut coeffs: Vec<S>, cap: usize) -> Self {
        if cap != EXACT_CAP {
            coeffs.truncate(cap + 1);
        }
        let mut s = TruncatedSeries { coeffs, cap };
        s.trim();
        s
    }

    pub fn zero_with_cap(cap: usize) -> Self {
        TruncatedSeries { coeffs: Vec::new(), cap }
    }

    pub fn one_with_cap(cap: usize) -> Self {
        TruncatedSeries::new(vec![S::one()], cap)
    }

    /// `c · z^k`, or zero if `k > cap`.
    pub fn monomial(c: S, k: usize, cap: usize) -> Self {
        if k > cap {
            return Self::zero_with_cap(cap);
        }
        let mut v = vec![S::zero(); k + 1];
        v[k] = c;
        TruncatedSeries::new(v, cap)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Stored coefficients up to the last nonzero one.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        TruncatedSeries::new(self.coeffs.clone(), cap.min(self.cap))
    }

    pub fn scale(&self, c: &S) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.cap)
    }

    /// Substitutes `z ↦ c·z`.
    pub fn scale_var(&self, c: &S) -> Self {
        let mut pw = S::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * pw.clone());
            pw = pw * c.clone();
        }
        TruncatedSeries::new(out, self.cap)
    }

    fn finite_cap(&self, what: &str) -> Result<usize> {
        if self.cap == EXACT_CAP {
            Err(Error::Truncation(format!("{what} of an uncapped series needs an explicit cap")))
        } else {
            Ok(self.cap)
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let cap = self.finite_cap("inverse")?;
        let mut out: Vec<S> = Vec::with_capacity(cap + 1);
        let inv0 = S::one() / c0;
        out.push(inv0.clone());
        for n in 1..=cap {
            let mut s = S::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                s = s + self.coeffs[k].clone() * out[n - k].clone();
            }
            out.push(-(s * inv0.clone()));
        }
        Ok(TruncatedSeries::new(out, cap))
    }

    /// `exp f` for `f(0) = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let cap = self.finite_cap("exp")?;
        let mut g: Vec<S> = Vec::with_capacity(cap + 1);
        g.push(S::one());
        for n in 1..=cap {
            let mut s = S::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                s = s + S::from_i64(k as i64) * self.coeffs[k].clone() * g[n - k].clone();
            }
            g.push(s / S::from_i64(n as i64));
        }
        Ok(TruncatedSeries::new(g, cap))
    }

    /// `log f` for `f(0) = 1`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(0).is_one() {
            return Err(Error::InvalidParameter("log needs constant term 1".into()));
        }
        let cap = self.finite_cap("log")?;
        let mut l: Vec<S> = vec![S::zero(); cap + 1];
        for n in 1..=cap {
            let mut s = S::from_i64(n as i64) * self.coeff(n);
            for k in 1..n {
                s = s - S::from_i64(k as i64) * l[k].clone() * self.coeff(n - k);
            }
            l[n] = s / S::from_i64(n as i64);
        }
        Ok(TruncatedSeries::new(l, cap))
    }

    /// Evaluates the truncation at a point.
    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }
}

impl<S: Scalar> Zero for TruncatedSeries<S> {
    fn zero() -> Self {
        Self::zero_with_cap(EXACT_CAP)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for TruncatedSeries<S> {
    fn one() -> Self {
        Self::one_with_cap(EXACT_CAP)
    }
}

impl<S: Scalar> Add for TruncatedSeries<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        TruncatedSeries::new(out, cap)
    }
}

impl<S: Scalar> Sub for TruncatedSeries<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for TruncatedSeries<S> {
    type Output = Self;
    fn neg(self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), cap: self.cap }
    }
}

impl<S: Scalar> Mul for TruncatedSeries<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero_with_cap(cap);
        }
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = if cap == EXACT_CAP { full } else { full.min(cap + 1) };
        let mut out = vec![S::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries::new(out, cap)
    }
}

/// Determinant over a commutative ring without divisions (Berkowitz).
///
/// Works for exact rationals, floats, and truncated series alike.
pub fn det_ring<R>(m: &[Vec<R>]) -> R
where
    R: Clone + Zero + One + Add<Output = R> + Sub<Output = R> + Mul<Output = R> + Neg<Output = R>,
{
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    // characteristic polynomial coefficients of the leading r×r block
    let mut p: Vec<R> = vec![R::one(), -m[0][0].clone()];
    for r in 1..n {
        // q = [1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C]
        let mut q: Vec<R> = Vec::with_capacity(r + 2);
        q.push(R::one());
        q.push(-m[r][r].clone());
        let mut w: Vec<R> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let mut s = R::zero();
            for (k, wk) in w.iter().enumerate() {
                s = s + m[r][k].clone() * wk.clone();
            }
            q.push(-s);
            let next: Vec<R> = (0..r)
                .map(|i| {
                    let mut acc = R::zero();
                    for (k, wk) in w.iter().enumerate() {
                        acc = acc + m[i][k].clone() * wk.clone();
                    }
                    acc
                })
                .collect();
            w = next;
        }
        let mut np: Vec<R> = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = R::zero();
            for j in 0..=i.min(r) {
                if i - j < q.len() {
                    acc = acc + q[i - j].clone() * p[j].clone();
                }
            }
            np.push(acc);
        }
        p = np;
    }
    let d = p[n].clone();
    if n.is_multiple_of(2) {
        d
    } else {
        -d
    }
}

/// Determinant over a field by Gaussian elimination with largest-magnitude pivots.
pub fn det_field<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut det = S::one();
    for c in 0..n {
        let mut piv = None;
        let mut best = -1.0f64;
        for (r, row) in a.iter().enumerate().skip(c) {
            if row[c].is_zero() {
                continue;
            }
            let v = row[c].abs_f64();
            if v > best {
                best = v;
                piv = Some(r);
            }
        }
        let Some(pr) = piv else { return S::zero() };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det = det * pv.clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / pv.clone();
            for k in c..n {
                let v = a[r][k].clone() - f.clone() * a[c][k].clone();
                a[r][k] = v;
            }
        }
    }
    det
}

/// `det (φ_{j−i})_{0≤i,j<k}`; the empty determinant is `1`.
pub fn toeplitz_det<R, F>(symbol: F, k: usize) -> R
where
    R: Clone + Zero + One + Add<Output = R> + Sub<Output = R> + Mul<Output = R> + Neg<Output = R>,
    F: Fn(i64) -> R,
{
    let m: Vec<Vec<R>> =
        (0..k).map(|i| (0..k).map(|j| symbol(j as i64 - i as i64)).collect()).collect();
    det_ring(&m)
}

/// Geometric majorant for coefficients just outside a window:
/// the `k`-th discarded coefficient (`k ≥ 1`) is at most `c · ratio^k` in magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    pub c: f64,
    pub ratio: f64,
}

impl Tail {
    pub const ZERO: Tail = Tail { c: 0.0, ratio: 0.0 };

    pub fn at(&self, k: i64) -> f64 {
        if self.c == 0.0 {
            0.0
        } else {
            self.c * self.ratio.powi(k as i32)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c == 0.0
    }
}

/// Coefficients `a_n` for `lo ≤ n ≤ hi` of a two-sided series, each with an error
/// bound, plus geometric majorants for everything outside.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentWindow<S> {
    lo: i64,
    coeffs: Vec<S>,
    err: Vec<f64>,
    upper: Tail,
    lower: Tail,
}

impl<S: Scalar> LaurentWindow<S> {
    /// Window starting at index `lo`. `err` defaults to zeros when empty.
    pub fn new(lo: i64, coeffs: Vec<S>, err: Vec<f64>, upper: Tail, lower: Tail) -> Self {
        assert!(!coeffs.is_empty(), "window needs at least one coefficient");
        let err = if err.is_empty() { vec![0.0; coeffs.len()] } else { err };
        assert_eq!(err.len(), coeffs.len());
        LaurentWindow { lo, coeffs, err, upper, lower }
    }

    /// A finite Laurent polynomial, exact with zero tails.
    pub fn exact(lo: i64, coeffs: Vec<S>) -> Self {
        Self::new(lo, coeffs, Vec::new(), Tail::ZERO, Tail::ZERO)
    }

    /// The constant series `1`.
    pub fn delta() -> Self {
        Self::exact(0, vec![S::one()])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn upper_tail(&self) -> Tail {
        self.upper
    }

    pub fn lower_tail(&self) -> Tail {
        self.lower
    }

    /// Stored value and its error bound, or zero and the majorant outside the window.
    pub fn coeff(&self, n: i64) -> (S, f64) {
        if n > self.hi() {
            (S::zero(), self.upper.at(n - self.hi()))
        } else if n < self.lo {
            (S::zero(), self.lower.at(self.lo - n))
        } else {
            let i = (n - self.lo) as usize;
            (self.coeffs[i].clone(), self.err[i])
        }
    }

    pub fn value(&self, n: i64) -> S {
        self.coeff(n).0
    }

    /// Bound on every coefficient outside the window.
    pub fn tail_bound(&self) -> f64 {
        let up = if self.upper.ratio > 1.0 && !self.upper.is_zero() { f64::INFINITY } else { self.upper.at(1) };
        let lo = if self.lower.ratio > 1.0 && !self.lower.is_zero() { f64::INFINITY } else { self.lower.at(1) };
        up.max(lo)
    }

    /// Largest error bound on a stored coefficient.
    pub fn max_error(&self) -> f64 {
        self.err.iter().cloned().fold(0.0, f64::max)
    }

    /// `Σ a_n z^{-n}`: swaps the roles of the two tails.
    pub fn reflect(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        let mut err = self.err.clone();
        err.reverse();
        LaurentWindow { lo: -self.hi(), coeffs, err, upper: self.lower, lower: self.upper }
    }

    /// `z^k · a(z)`.
    pub fn shift(&self, k: i64) -> Self {
        let mut w = self.clone();
        w.lo += k;
        w
    }

    fn env(&self, n: i64) -> f64 {
        let (v, e) = self.coeff(n);
        v.abs_f64() + e
    }

    /// Stored coefficients as CSV rows `index,value,error`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,value,error\n");
        for (i, (c, e)) in self.coeffs.iter().zip(&self.err).enumerate() {
            let _ = writeln!(s, "{},{:e},{:e}", self.lo + i as i64, c.to_f64(), e);
        }
        s
    }
}

impl LaurentWindow<f64> {
    /// Evaluates the stored part at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + *c;
        }
        acc * z.powi(self.lo as i32)
    }
}

/// Product of two windows. The result covers `[lo_a + lo_b, hi_a + hi_b]`; each
/// coefficient's error bound accounts for the input errors, every product term
/// that involves a discarded coefficient, and floating rounding.
pub fn laurent_mul<S: Scalar>(a: &LaurentWindow<S>, b: &LaurentWindow<S>) -> LaurentWindow<S> {
    let lo = a.lo + b.lo;
    let hi = a.hi() + b.hi();
    let len = (hi - lo + 1) as usize;
    let mut coeffs = vec![S::zero(); len];
    let mut err = vec![0.0f64; len];
    let mut absum = vec![0.0f64; len];
    for (i, ai) in a.coeffs.iter().enumerate() {
        for (j, bj) in b.coeffs.iter().enumerate() {
            let k = i + j;
            coeffs[k] = coeffs[k].clone() + ai.clone() * bj.clone();
            let (x, y) = (ai.abs_f64(), bj.abs_f64());
            absum[k] += x * y;
            err[k] += x * b.err[j] + a.err[i] * y + a.err[i] * b.err[j];
        }
    }
    let rounding = if S::is_exact() { 0.0 } else { 4.0 * f64::EPSILON * (a.coeffs.len().min(b.coeffs.len()) as f64 + 1.0) };
    for k in 0..len {
        let n = lo + k as i64;
        err[k] += rounding * absum[k] + excluded_sum(a, b, n);
    }
    let upper = upper_product_tail(a, b);
    let lower = upper_product_tail(&a.reflect(), &b.reflect());
    LaurentWindow { lo, coeffs, err, upper, lower }
}

// Σ over pairs (k, n−k) with at least one index outside its window of env_a(k)·env_b(n−k).
fn excluded_sum<S: Scalar>(a: &LaurentWindow<S>, b: &LaurentWindow<S>, n: i64) -> f64 {
    let (alo, ahi, blo, bhi) = (a.lo, a.hi(), b.lo, b.hi());
    let mut s = 0.0;
    // a stored, b discarded
    if !(a.upper.is_zero() && a.lower.is_zero() && b.upper.is_zero() && b.lower.is_zero()) {
        for k in alo..=ahi {
            let j = n - k;
            if j > bhi || j < blo {
                s += a.env(k) * b.env(j);
            }
        }
        // a discarded, b stored
        for j in blo..=bhi {
            let k = n - j;
            if k > ahi || k < alo {
                s += a.env(k) * b.env(j);
            }
        }
    }
    // both discarded: four regions
    // a above, b above: k in [ahi+1, n-bhi-1]
    if !a.upper.is_zero() && !b.upper.is_zero() {
        for k in (ahi + 1)..=(n - bhi - 1) {
            s += a.upper.at(k - ahi) * b.upper.at(n - k - bhi);
        }
    }
    // a below, b below: k in [n-blo+1, alo-1]
    if !a.lower.is_zero() && !b.lower.is_zero() {
        for k in (n - blo + 1)..=(alo - 1) {
            s += a.lower.at(alo - k) * b.lower.at(blo - (n - k));
        }
    }
    // a above, b below: k ≥ max(ahi+1, n-blo+1), infinite
    if !a.upper.is_zero() && !b.lower.is_zero() {
        let k0 = (ahi + 1).max(n - blo + 1);
        let r = a.upper.ratio * b.lower.ratio;
        s += if r >= 1.0 {
            f64::INFINITY
        } else {
            a.upper.at(k0 - ahi) * b.lower.at(blo - (n - k0)) / (1.0 - r)
        };
    }
    // a below, b above: k ≤ min(alo-1, n-bhi-1), infinite
    if !a.lower.is_zero() && !b.upper.is_zero() {
        let k1 = (alo - 1).min(n - bhi - 1);
        let r = a.lower.ratio * b.upper.ratio;
        s += if r >= 1.0 {
            f64::INFINITY
        } else {
            a.lower.at(alo - k1) * b.upper.at(n - k1 - bhi) / (1.0 - r)
        };
    }
    s
}

// Geometric majorant for the product's coefficients above hi_a + hi_b.
fn upper_product_tail<S: Scalar>(a: &LaurentWindow<S>, b: &LaurentWindow<S>) -> Tail {
    let (alo, ahi, blo, bhi) = (a.lo, a.hi(), b.lo, b.hi());
    let (ua, ub, la, lb) = (a.upper, b.upper, a.lower, b.lower);
    if ua.is_zero() && ub.is_zero() {
        return Tail::ZERO;
    }
    let mut terms: Vec<(f64, f64)> = Vec::new();
    if !ub.is_zero() {
        let s: f64 = (alo..=ahi).map(|k| a.env(k) * ub.ratio.powi((ahi - k) as i32)).sum();
        terms.push((ub.c * s, ub.ratio));
    }
    if !ua.is_zero() {
        let s: f64 = (blo..=bhi).map(|j| b.env(j) * ua.ratio.powi((bhi - j) as i32)).sum();
        terms.push((ua.c * s, ua.ratio));
    }
    if !ua.is_zero() && !lb.is_zero() {
        let r = ua.ratio * lb.ratio;
        let c = if r >= 1.0 {
            f64::INFINITY
        } else {
            ua.c * lb.c * lb.ratio * ua.ratio.powi((bhi - blo + 1) as i32) / (1.0 - r)
        };
        terms.push((c, ua.ratio));
    }
    if !la.is_zero() && !ub.is_zero() {
        let r = la.ratio * ub.ratio;
        let c = if r >= 1.0 {
            f64::INFINITY
        } else {
            la.c * ub.c * la.ratio * ub.ratio.powi((ahi - alo + 1) as i32) / (1.0 - r)
        };
        terms.push((c, ub.ratio));
    }
    let mut rho = terms.iter().map(|t| t.1).fold(0.0, f64::max);
    let mut c: f64 = terms.iter().map(|t| t.0).sum();
    if !ua.is_zero() && !ub.is_zero() {
        // Σ_{i=1}^{N-1} ρa^i ρb^{N-i}
        let (big, small) = if ua.ratio >= ub.ratio { (ua.ratio, ub.ratio) } else { (ub.ratio, ua.ratio) };
        let q = if big > 0.0 { small / big } else { 0.0 };
        if q < 0.9 {
            c += ua.c * ub.c * q / (1.0 - q);
        } else {
            // (N-1)ρ^N ≤ (γρ)^N / (e ln γ)
            let gamma = 1.05f64;
            rho = rho.max(big * gamma);
            c += ua.c * ub.c / (std::f64::consts::E * gamma.ln());
        }
    }
    Tail { c, ratio: rho }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn ts(v: &[i64], cap: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(v.iter().map(|&c| rat(c, 1)).collect(), cap)
    }

    #[test]
    fn inverse_of_one_minus_z() {
        let inv = ts(&[1, -1], 5).inverse().unwrap();
        assert_eq!(inv, ts(&[1, 1, 1, 1, 1, 1], 5));
        assert_eq!(ts(&[0, 1], 3).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn exp_of_z() {
        let e = ts(&[0, 1], 5).exp().unwrap();
        let want: Vec<Rational> = [1, 1, 2, 6, 24, 120].iter().map(|&f| rat(1, f)).collect();
        assert_eq!(e, TruncatedSeries::new(want, 5));
        assert_eq!(ts(&[1, 1], 3).exp(), Err(Error::NonzeroConstant));
    }

    #[test]
    fn log_inverts_exp() {
        let f = TruncatedSeries::new(vec![rat(0, 1), rat(2, 3), rat(-1, 5), rat(7, 2)], 8);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn mixed_caps_truncate_to_smaller() {
        let p = ts(&[1, 1], 10) * ts(&[1, 1], 3);
        assert_eq!(p.cap(), 3);
        let q = ts(&[1, 2, 3, 4, 5], 2);
        assert_eq!(q.coeffs().len(), 3);
    }

    #[test]
    fn determinant_small_cases() {
        let m: Vec<Vec<Rational>> = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]];
        assert_eq!(det_ring(&m), rat(5, 1));
        assert_eq!(det_field(&m), rat(5, 1));
        let empty: Vec<Vec<Rational>> = vec![];
        assert_eq!(det_ring(&empty), rat(1, 1));
        // Toeplitz with symbol 1 + z: lower bidiagonal... entries φ_{j-i}
        let d: Rational = toeplitz_det(|m| if m == 0 || m == 1 { rat(1, 1) } else { rat(0, 1) }, 4);
        assert_eq!(d, rat(1, 1));
        let d0: Rational = toeplitz_det(|_| rat(1, 1), 0);
        assert_eq!(d0, rat(1, 1));
    }

    #[test]
    fn determinant_over_series_ring() {
        let a = ts(&[1, 1], 4);
        let b = ts(&[0, 1], 4);
        let m = vec![vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]];
        // (1+z)^2 - z^2 = 1 + 2z
        assert_eq!(det_ring(&m), ts(&[1, 2], 4));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-5i64..6, n), n)
    }

    // Leibniz expansion, used as an independent oracle.
    fn leibniz(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        permute(&mut idx, 0, m, &mut total);
        total
    }

    fn permute(idx: &mut Vec<usize>, k: usize, m: &[Vec<i64>], total: &mut i64) {
        let n = idx.len();
        if k == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if idx[i] > idx[j] {
                        inv += 1;
                    }
                }
            }
            let prod: i64 = (0..n).map(|i| m[i][idx[i]]).product();
            *total += if inv % 2 == 0 { prod } else { -prod };
            return;
        }
        for i in k..n {
            idx.swap(k, i);
            permute(idx, k + 1, m, total);
            idx.swap(k, i);
        }
    }

    proptest! {
        #[test]
        fn berkowitz_and_elimination_agree_with_leibniz(m in (1usize..6).prop_flat_map(arb_matrix)) {
            let q: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect();
            let want = rat(leibniz(&m), 1);
            prop_assert_eq!(det_ring(&q), want.clone());
            prop_assert_eq!(det_field(&q), want);
        }

        #[test]
        fn inverse_times_series_is_one(v in proptest::collection::vec(-4i64..5, 1..6)) {
            let mut v = v;
            v[0] = if v[0] == 0 { 1 } else { v[0] };
            let f = ts(&v, 7);
            let p = f.clone() * f.inverse().unwrap();
            prop_assert_eq!(p, TruncatedSeries::one_with_cap(7));
        }
    }

    fn exp_window(sign: f64, m: usize) -> LaurentWindow<f64> {
        // coefficients sign^n / n! for 0 ≤ n ≤ m; tail by Cauchy on |z| = R
        let r = (m as f64 + 1.0).max(2.0);
        let mut c = vec![1.0f64];
        for n in 1..=m {
            let prev = c[n - 1];
            c.push(prev * sign / n as f64);
        }
        let big_m = r.exp() * r.powi(-(m as i32));
        LaurentWindow::new(0, c, vec![], Tail { c: big_m, ratio: 1.0 / r }, Tail::ZERO)
    }

    #[test]
    fn laurent_examples() {
        let w = LaurentWindow::exact(-1, vec![rat(1, 1), rat(0, 1), rat(1, 1)]);
        let sq = laurent_mul(&w, &w);
        assert_eq!(sq.lo(), -2);
        let vals: Vec<Rational> = (-2..=2).map(|n| sq.value(n)).collect();
        assert_eq!(vals, vec![rat(1, 1), rat(0, 1), rat(2, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(sq.tail_bound(), 0.0);
        let d = laurent_mul(&LaurentWindow::delta(), &w);
        assert_eq!(d, w);
    }

    #[test]
    fn exp_times_exp_minus_is_delta_within_bound() {
        let a = exp_window(1.0, 20);
        let b = exp_window(-1.0, 20);
        let p = laurent_mul(&a, &b);
        for n in 0..=40 {
            let (v, e) = p.coeff(n);
            let want = if n == 0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() <= e + 1e-15, "n = {n}: {v} vs {want}, bound {e}");
        }
        assert!(p.coeff(0).1 < 1e-6);
    }

    #[test]
    fn reflect_and_shift() {
        let w = LaurentWindow::exact(1, vec![1.0, 2.0]);
        let r = w.reflect();
        assert_eq!((r.lo(), r.hi()), (-2, -1));
        assert_eq!(r.value(-2), 2.0);
        assert_eq!(w.shift(3).value(4), 1.0);
        let z = Complex64::new(0.5, 0.0);
        assert!((w.eval(z).re - (0.5 + 2.0 * 0.25)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn window_growth_stays_within_reported_bounds(sign in prop_oneof![Just(1.0f64), Just(-1.0f64)], m in 6usize..14) {
            let small = laurent_mul(&exp_window(sign, m), &exp_window(1.0, m).reflect());
            let large = laurent_mul(&exp_window(sign, m + 10), &exp_window(1.0, m + 10).reflect());
            for n in small.lo()..=small.hi() {
                let (a, ea) = small.coeff(n);
                let (b, _) = large.coeff(n);
                prop_assert!((a - b).abs() <= ea + 1e-14, "n = {}", n);
            }
            for n in (large.lo()..small.lo()).chain(small.hi() + 1..=large.hi()) {
                let (b, eb) = large.coeff(n);
                prop_assert!(b.abs() <= small.coeff(n).1 + eb + 1e-14, "tail at n = {}", n);
            }
        }
    }
}
