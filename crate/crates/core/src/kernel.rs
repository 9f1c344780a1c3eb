//! The correlation kernel of the t-Schur point process.
//!
//! `𝒥(z) = ∏ (1 − t x_i z)/(1 − x_i z) · ∏ (1 − y_j/z) · exp((1−t) a z − b/z)`,
//! where `a` and `b` carry an extra Plancherel (exponential) part. Labels are
//! integers `d`; the point itself is `d + 1/2`, and
//! `K(d, e) = Σ_{r≥0} 𝒥_{d+r+1} 𝒥̂_{−e−r−1}` with `𝒥̂ = 1/𝒥`.
//!
//! All coefficients live in [`LaurentWindow`]s whose tails come from Cauchy
//! estimates on circles inside the annulus of convergence, so every kernel
//! entry carries an error bound.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::TSchurParams;
use crate::partition::{contains_points, enumerate_bounded, EnumMode, PointSet};
use crate::scalar::{ratio_to_f64, Rational, Scalar};
use crate::series::{det_field, laurent_mul, LaurentWindow, Tail, TruncatedSeries};
use crate::symfunc::{PowerSumSpec, SchurEvaluator};

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolParams {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

impl SymbolParams {
    pub fn finite(x: Vec<f64>, y: Vec<f64>, t: f64) -> Self {
        SymbolParams { x, y, t, a: 0.0, b: 0.0 }
    }

    /// `𝒥(z) = exp((1−t) a z − b/z)`.
    pub fn plancherel(a: f64, b: f64, t: f64) -> Self {
        SymbolParams { x: Vec::new(), y: Vec::new(), t, a, b }
    }

    pub fn from_tschur(p: &TSchurParams) -> Self {
        let f = |v: &[Rational]| v.iter().map(ratio_to_f64).collect();
        SymbolParams::finite(f(p.x()), f(p.y()), ratio_to_f64(p.t()))
    }

    fn max_x(&self) -> f64 {
        self.x.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    fn max_y(&self) -> f64 {
        self.y.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Outer radius for `𝒥`.
    fn r_out_j(&self) -> f64 {
        1.0 / self.max_x()
    }

    /// Outer radius for `𝒥̂`.
    fn r_out_jhat(&self) -> f64 {
        1.0 / (self.t.abs() * self.max_x())
    }

    /// `(r_in, r_out)`: both `𝒥` and `𝒥̂` converge for `r_in < |z| < r_out`.
    pub fn annulus(&self) -> (f64, f64) {
        (self.max_y(), self.r_out_j().min(self.r_out_jhat()))
    }

    // radius separating the analytic-inside factors from the analytic-outside ones
    fn split(&self) -> f64 {
        let (lo, hi) = self.annulus();
        match (lo > 0.0, hi.is_finite()) {
            (true, true) => (lo * hi).sqrt(),
            (false, true) => hi.min(2.0) / 2.0,
            (true, false) => (2.0 * lo).max(1.0),
            (false, false) => 1.0,
        }
    }

    /// `𝒥(z)` from the product formula.
    pub fn eval_j(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut v = ((1.0 - self.t) * self.a * z - self.b / z).exp();
        for &x in &self.x {
            v *= (one - self.t * x * z) / (one - x * z);
        }
        for &y in &self.y {
            v *= one - y / z;
        }
        v
    }

    // max-modulus bounds for the four factors on |z| = ρ
    fn bound_p(&self, rho: f64) -> f64 {
        let mut m = ((1.0 - self.t).abs() * self.a.abs() * rho).exp();
        for &x in &self.x {
            m *= (1.0 + self.t.abs() * x.abs() * rho) / (1.0 - x.abs() * rho);
        }
        m
    }

    fn bound_pinv(&self, rho: f64) -> f64 {
        let mut m = ((1.0 - self.t).abs() * self.a.abs() * rho).exp();
        for &x in &self.x {
            m *= (1.0 + x.abs() * rho) / (1.0 - self.t.abs() * x.abs() * rho);
        }
        m
    }

    fn bound_q(&self, rho: f64) -> f64 {
        let mut m = (self.b.abs() / rho).exp();
        for &y in &self.y {
            m *= 1.0 + y.abs() / rho;
        }
        m
    }

    fn bound_qinv(&self, rho: f64) -> f64 {
        let mut m = (self.b.abs() / rho).exp();
        for &y in &self.y {
            m /= 1.0 - y.abs() / rho;
        }
        m
    }

    fn validate(&self) -> Result<()> {
        let finite = self.x.iter().chain(&self.y).chain([&self.t, &self.a, &self.b]).all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite symbol parameter".into()));
        }
        if self.max_x() >= 1.0 {
            return Err(Error::InvalidParameter("need max |x_i| < 1".into()));
        }
        if self.y.iter().any(|&y| y < 0.0) {
            return Err(Error::InvalidParameter("need y_j ≥ 0".into()));
        }
        let (lo, hi) = self.annulus();
        if lo >= hi {
            return Err(Error::InvalidParameter(format!("empty annulus ({lo}, {hi})")));
        }
        Ok(())
    }
}

/// Power series window `[0, m]` from factor series, with a Cauchy tail on a
/// radius in `(r_lo, r_hi)` chosen to minimize the bound on coefficient `m+1`.
fn power_window(
    factors: &[Vec<f64>],
    m: usize,
    bound: impl Fn(f64) -> f64,
    r_lo: f64,
    r_hi: f64,
    polynomial: bool,
) -> LaurentWindow<f64> {
    let mut acc = TruncatedSeries::one_with_cap(m);
    let mut shadow = TruncatedSeries::one_with_cap(m);
    for f in factors {
        acc = acc * TruncatedSeries::new(f.clone(), m);
        shadow = shadow * TruncatedSeries::new(f.iter().map(|c| c.abs()).collect(), m);
    }
    let k = factors.len() as f64;
    let coeffs: Vec<f64> = (0..=m).map(|n| acc.coeff(n)).collect();
    let err: Vec<f64> = (0..=m).map(|n| 4.0 * EPS * (n as f64 + k + 2.0) * shadow.coeff(n)).collect();
    let upper = if polynomial { Tail::ZERO } else { cauchy_tail(bound, r_lo, r_hi, m) };
    LaurentWindow::new(0, coeffs, err, upper, Tail::ZERO)
}

fn cauchy_tail(bound: impl Fn(f64) -> f64, r_lo: f64, r_hi: f64, m: usize) -> Tail {
    let hi = if r_hi.is_finite() { r_hi } else { (r_lo * 1e4).max(10.0 * (m as f64 + 1.0)) };
    let (l0, l1) = (r_lo.ln(), hi.ln());
    let mut best = (f64::INFINITY, r_lo);
    for i in 1..400 {
        let r = (l0 + (l1 - l0) * i as f64 / 400.0).exp();
        let v = bound(r).ln() - (m as f64 + 1.0) * r.ln();
        if v.is_finite() && v < best.0 {
            best = (v, r);
        }
    }
    let r = best.1;
    if !best.0.is_finite() {
        return Tail { c: f64::INFINITY, ratio: 1.0 / r };
    }
    Tail { c: (bound(r).ln() - m as f64 * r.ln()).exp(), ratio: 1.0 / r }
}

fn exp_coeffs(c: f64, m: usize) -> Vec<f64> {
    let mut v = vec![1.0; m + 1];
    for n in 1..=m {
        v[n] = v[n - 1] * c / n as f64;
    }
    v
}

fn geometric(lead: f64, ratio: f64, m: usize) -> Vec<f64> {
    let mut v = vec![1.0; m + 1];
    for n in 1..=m {
        v[n] = if n == 1 { lead } else { v[n - 1] * ratio };
    }
    v
}

/// Laurent windows of `𝒥` and `𝒥̂` on `[−m, m]`.
#[derive(Clone, Debug)]
pub struct Symbol {
    params: SymbolParams,
    window: usize,
    j: LaurentWindow<f64>,
    jhat: LaurentWindow<f64>,
}

pub fn symbol(params: &SymbolParams, m: usize) -> Result<Symbol> {
    params.validate()?;
    let p = params;
    let s = p.split();
    let (r_in, _) = p.annulus();
    let t = p.t;
    // (1 − t x z)/(1 − x z) = 1 + Σ (1−t) x^n z^n
    let pf: Vec<Vec<f64>> = p
        .x
        .iter()
        .map(|&x| geometric((1.0 - t) * x, x, m))
        .chain(std::iter::once(exp_coeffs((1.0 - t) * p.a, m)))
        .collect();
    // (1 − x z)/(1 − t x z) = 1 + Σ t^{n−1}(t − 1) x^n z^n
    let pinvf: Vec<Vec<f64>> = p
        .x
        .iter()
        .map(|&x| geometric((t - 1.0) * x, t * x, m))
        .chain(std::iter::once(exp_coeffs(-(1.0 - t) * p.a, m)))
        .collect();
    // in w = 1/z: ∏(1 − y w) e^{−b w} and ∏ 1/(1 − y w) e^{b w}
    let qf: Vec<Vec<f64>> = p
        .y
        .iter()
        .map(|&y| {
            let mut v = vec![0.0; m + 1];
            v[0] = 1.0;
            if m >= 1 {
                v[1] = -y;
            }
            v
        })
        .chain(std::iter::once(exp_coeffs(-p.b, m)))
        .collect();
    let qinvf: Vec<Vec<f64>> =
        p.y.iter().map(|&y| geometric(y, y, m)).chain(std::iter::once(exp_coeffs(p.b, m))).collect();

    let entire_p = p.a == 0.0 && p.x.iter().all(|&x| x == 0.0);
    let entire_q = p.b == 0.0 && p.y.len() <= m;
    let pw = power_window(&pf, m, |r| p.bound_p(r), s, p.r_out_j(), entire_p);
    let pinv = power_window(&pinvf, m, |r| p.bound_pinv(r), s, p.r_out_jhat(), entire_p);
    // Cauchy radii for the w-series are reciprocals of z-radii
    let qw = power_window(&qf, m, |r| p.bound_q(1.0 / r), 1.0 / s, f64::INFINITY, entire_q);
    let qinv = power_window(&qinvf, m, |r| p.bound_qinv(1.0 / r), 1.0 / s, 1.0 / r_in, p.b == 0.0 && p.y.is_empty());
    let j = laurent_mul(&pw, &qw.reflect());
    let jhat = laurent_mul(&pinv, &qinv.reflect());
    Ok(Symbol { params: params.clone(), window: m, j, jhat })
}

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounded {
    pub value: f64,
    pub error: f64,
}

impl Symbol {
    pub fn params(&self) -> &SymbolParams {
        &self.params
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn j(&self) -> &LaurentWindow<f64> {
        &self.j
    }

    pub fn jhat(&self) -> &LaurentWindow<f64> {
        &self.jhat
    }

    /// `K(d, e)` with its error bound.
    pub fn kernel_entry(&self, d: i64, e: i64) -> Result<Bounded> {
        let (j, jh) = (&self.j, &self.jhat);
        let (mut value, mut err, mut absum) = (0.0, 0.0, 0.0);
        let mut r = 0i64;
        loop {
            let (n1, n2) = (d + r + 1, -e - r - 1);
            if n1 > j.hi() && n2 < jh.lo() {
                break;
            }
            let (a, ea) = j.coeff(n1);
            let (b, eb) = jh.coeff(n2);
            value += a * b;
            absum += (a * b).abs();
            err += a.abs() * eb + ea * b.abs() + ea * eb;
            r += 1;
        }
        // both factors in their tails from here on
        let (n1, n2) = (d + r + 1, -e - r - 1);
        let (up, low) = (j.upper_tail(), jh.lower_tail());
        if !up.is_zero() && !low.is_zero() {
            let q = up.ratio * low.ratio;
            if q >= 1.0 {
                return Err(Error::Window(format!("kernel tail does not converge at ({d},{e})")));
            }
            err += up.at(n1 - j.hi()) * low.at(jh.lo() - n2) / (1.0 - q);
        }
        err += 4.0 * EPS * (r as f64 + 2.0) * absum;
        if !err.is_finite() {
            return Err(Error::Window(format!("window too small for ({d},{e})")));
        }
        Ok(Bounded { value, error: err })
    }

    /// Rigorous bound on `Σ_{d>h} |K(d, d)|` from Cauchy estimates on two circles.
    pub fn diagonal_tail(&self, h: i64) -> f64 {
        let p = &self.params;
        let (r_in, _) = p.annulus();
        let (r1_hi, r2_hi) = (p.r_out_j(), p.r_out_jhat());
        let r1_hi = if r1_hi.is_finite() { r1_hi } else { 1e3 * (1.0 + h.unsigned_abs() as f64) };
        let r2_lo = if r_in > 0.0 { r_in } else { 1e-6 * r1_hi.min(1.0) };
        let mut best = f64::INFINITY;
        let g = 60;
        for i in 1..g {
            let r1 = (r2_lo.ln() + (r1_hi.ln() - r2_lo.ln()) * i as f64 / g as f64).exp();
            let mj = p.bound_p(r1) * p.bound_q(r1);
            for k in 1..g {
                let r2 = (r2_lo.ln() + (r1.min(r2_hi).ln() - r2_lo.ln()) * k as f64 / g as f64).exp();
                let q = r2 / r1;
                if q >= 1.0 {
                    continue;
                }
                let v = mj * p.bound_pinv(r2) * p.bound_qinv(r2) * q.powf(h as f64 + 2.0) / ((1.0 - q) * (1.0 - q));
                if v < best {
                    best = v;
                }
            }
        }
        best
    }
}

/// Kernel values on the labels `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelWindow {
    pub lo: i64,
    pub hi: i64,
    pub values: Vec<Vec<f64>>,
    pub errors: Vec<Vec<f64>>,
    pub symbol_window: usize,
}

impl KernelWindow {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("d,e,point_d,point_e,value,error\n");
        for (i, row) in self.values.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let (d, e) = (self.lo + i as i64, self.lo + k as i64);
                s += &format!("{d},{e},{},{},{v:e},{:e}\n", d as f64 + 0.5, e as f64 + 0.5, self.errors[i][k]);
            }
        }
        s
    }
}

pub fn kernel_window(sym: &Symbol, lo: i64, hi: i64) -> Result<KernelWindow> {
    let rows: Vec<Result<Vec<Bounded>>> =
        (lo..=hi).into_par_iter().map(|d| (lo..=hi).map(|e| sym.kernel_entry(d, e)).collect()).collect();
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for r in rows {
        let r = r?;
        values.push(r.iter().map(|b| b.value).collect());
        errors.push(r.iter().map(|b| b.error).collect());
    }
    Ok(KernelWindow { lo, hi, values, errors, symbol_window: sym.window })
}

/// Bound on `|det(A + E) − det A|` for `|E_ij| ≤ err_ij`, by replacing one
/// column at a time and applying Hadamard's inequality to each term.
pub fn det_perturbation_bound(a: &[Vec<f64>], err: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let col = |m: &[Vec<f64>], j: usize| (0..n).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt();
    let na: Vec<f64> = (0..n).map(|j| col(a, j)).collect();
    let ne: Vec<f64> = (0..n).map(|j| col(err, j)).collect();
    let mut total = 0.0;
    for k in 0..n {
        let mut term = ne[k];
        for j in 0..n {
            if j < k {
                term *= na[j] + ne[j];
            } else if j > k {
                term *= na[j];
            }
        }
        total += term;
    }
    // rounding in the elimination itself
    total + 16.0 * EPS * (n as f64 + 1.0).powi(2) * na.iter().product::<f64>()
}

fn bounded_det(values: &[Vec<f64>], errors: &[Vec<f64>]) -> Bounded {
    if values.is_empty() {
        return Bounded { value: 1.0, error: 0.0 };
    }
    Bounded { value: det_field(values), error: det_perturbation_bound(values, errors) }
}

/// `det [K(x_i, x_j)]` over the labels of `xs`.
pub fn correlation(sym: &Symbol, xs: &PointSet) -> Result<Bounded> {
    let pts = &xs.points;
    let mut values = vec![vec![0.0; pts.len()]; pts.len()];
    let mut errors = values.clone();
    for (i, &d) in pts.iter().enumerate() {
        for (k, &e) in pts.iter().enumerate() {
            let b = sym.kernel_entry(d, e)?;
            values[i][k] = b.value;
            errors[i][k] = b.error;
        }
    }
    Ok(bounded_det(&values, &errors))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForce {
    pub value: f64,
    /// `1 − Σ_{|λ|≤D} ℙ(λ)`, the mass not enumerated.
    pub tail_bound: f64,
    pub degree_cap: usize,
}

/// `Σ_{|λ|≤D, X ⊂ 𝔖(λ)} ℙ_t(λ)` in exact arithmetic, skipping `ℓ(λ) > |y|` where `s_λ(y) = 0`.
pub fn correlation_bruteforce(params: &TSchurParams, xs: &PointSet, d: usize) -> Result<BruteForce> {
    let cap = d.max(1);
    let ex = SchurEvaluator::new(&PowerSumSpec::from_variables(params.x(), cap), params.t(), cap)?;
    let ey = SchurEvaluator::new(&PowerSumSpec::from_variables(params.y(), cap), &Rational::from_i64(0), cap)?;
    let mut hit = Rational::from_i64(0);
    let mut total = Rational::from_i64(0);
    for l in enumerate_bounded(d, EnumMode::UpTo, params.y().len()) {
        let w = ex.t_schur(&l)? * ey.t_schur(&l)?;
        if contains_points(&l, &xs.points) {
            hit += w.clone();
        }
        total += w;
    }
    let z = params.partition_function().clone();
    Ok(BruteForce {
        value: ratio_to_f64(&(hit / z.clone())),
        tail_bound: ratio_to_f64(&(Rational::from_i64(1) - total / z)),
        degree_cap: d,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapResult {
    pub h: i64,
    pub truncation: usize,
    pub value: f64,
    pub det_error: f64,
    pub truncation_error: f64,
}

impl GapResult {
    pub fn error(&self) -> f64 {
        self.det_error + self.truncation_error
    }
}

/// `ℙ(λ₁ ≤ h) ≈ det(I − K)` on the labels `h..=h+L`. The neglected part is at most
/// the expected number of points above `h + L`, bounded by [`Symbol::diagonal_tail`].
pub fn gap_probability(sym: &Symbol, h: i64, l: usize) -> Result<GapResult> {
    let n = l + 1;
    let mut values = vec![vec![0.0; n]; n];
    let mut errors = values.clone();
    for i in 0..n {
        for k in 0..n {
            let b = sym.kernel_entry(h + i as i64, h + k as i64)?;
            values[i][k] = if i == k { 1.0 } else { 0.0 } - b.value;
            errors[i][k] = b.error;
        }
    }
    let det = bounded_det(&values, &errors);
    Ok(GapResult {
        h,
        truncation: l,
        value: det.value,
        det_error: det.error,
        truncation_error: sym.diagonal_tail(h + l as i64),
    })
}

/// Smallest `L ≤ max_l` whose truncation error is below `tol`.
pub fn gap_probability_auto(sym: &Symbol, h: i64, tol: f64, max_l: usize) -> Result<GapResult> {
    for l in 0..=max_l {
        if sym.diagonal_tail(h + l as i64) < tol {
            return gap_probability(sym, h, l);
        }
    }
    Err(Error::Window(format!("no truncation up to {max_l} reaches {tol:e} at h={h}")))
}

/// Test circles `|z| = r₁ > |w| = r₂` inside the annulus.
pub fn test_radii(params: &SymbolParams) -> (f64, f64) {
    let (lo, hi) = params.annulus();
    let s = params.split();
    let r1 = if hi.is_finite() { (s.ln() * 0.6 + hi.ln() * 0.4).exp() } else { 1.5 * s };
    let r2 = if lo > 0.0 { (s.ln() * 0.6 + lo.ln() * 0.4).exp() } else { 0.6 * s };
    (r1, r2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dp1Report {
    pub step: f64,
    pub points: usize,
    pub max_residual: f64,
}

/// Central difference of `√(zw)/(z−w) · 𝒥(z)/𝒥(w)` in the `p₁(x)` direction, with
/// `𝒥` evaluated from its windows, against `(1−t) √(zw) 𝒥(z)/𝒥(w)`.
pub fn dp1_derivative_check(params: &SymbolParams, grid: &[(Complex64, Complex64)], h: f64, m: usize) -> Result<Dp1Report> {
    let shifted = |da: f64| symbol(&SymbolParams { a: params.a + da, ..params.clone() }, m);
    let (sp, s0, sm) = (shifted(h)?, shifted(0.0)?, shifted(-h)?);
    let gf = |s: &Symbol, z: Complex64, w: Complex64| (z * w).sqrt() / (z - w) * s.j.eval(z) * s.jhat.eval(w);
    let mut worst: f64 = 0.0;
    for &(z, w) in grid {
        let diff = (gf(&sp, z, w) - gf(&sm, z, w)) / (2.0 * h);
        let want = (1.0 - params.t) * (z * w).sqrt() * s0.j.eval(z) * s0.jhat.eval(w);
        worst = worst.max((diff - want).norm());
    }
    Ok(Dp1Report { step: h, points: grid.len(), max_residual: worst })
}

/// An `n × n` grid of pairs on the test circles.
pub fn circle_grid(params: &SymbolParams, n: usize) -> Vec<(Complex64, Complex64)> {
    let (r1, r2) = test_radii(params);
    let mut g = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / n as f64;
            let ph = 2.0 * std::f64::consts::PI * (k as f64 + 0.6) / n as f64;
            g.push((Complex64::from_polar(r1, th), Complex64::from_polar(r2, ph)));
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dp1Refinement {
    pub coarse: Dp1Report,
    pub fine: Dp1Report,
    pub slope: f64,
}

/// Residuals at `h` and `h/2`; `slope = log₂` of their ratio.
pub fn dp1_refinement(params: &SymbolParams, grid: &[(Complex64, Complex64)], h: f64, m: usize) -> Result<Dp1Refinement> {
    let coarse = dp1_derivative_check(params, grid, h, m)?;
    let fine = dp1_derivative_check(params, grid, h / 2.0, m)?;
    let slope = (coarse.max_residual / fine.max_residual).log2();
    Ok(Dp1Refinement { coarse, fine, slope })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IiksReport {
    pub rank: usize,
    pub lo: i64,
    pub hi: i64,
    pub max_residual: f64,
    pub max_bound: f64,
    /// Largest residual relative to its own certified bound.
    pub worst_ratio: f64,
    pub passed: bool,
}

fn series_window(lo: i64, coeffs: Vec<f64>, upper: Tail, lower: Tail) -> LaurentWindow<f64> {
    LaurentWindow::new(lo, coeffs, Vec::new(), upper, lower)
}

/// The pairs `(F_ν(z), G_ν(w))` with `(zL(z) − wL(w))/(z − w) = Σ F_ν(z) G_ν(w)`, `L = 𝒥'/𝒥`.
fn iiks_factors(p: &SymbolParams, m: usize) -> Vec<(LaurentWindow<f64>, LaurentWindow<f64>)> {
    let pow = |lead: f64, r: f64| -> (Vec<f64>, Tail) {
        let v: Vec<f64> = (0..=m).map(|n| lead * r.powi(n as i32)).collect();
        (v, Tail { c: (lead * r.powi(m as i32)).abs(), ratio: r.abs() })
    };
    let mut out = Vec::new();
    let mut push_geo = |lead_f: f64, r: f64| {
        let (f, tf) = pow(lead_f, r);
        let (g, tg) = pow(1.0, r);
        out.push((series_window(0, f, tf, Tail::ZERO), series_window(0, g, tg, Tail::ZERO)));
    };
    for &x in &p.x {
        // x/(1 − xz) · 1/(1 − xw)
        push_geo(x, x);
        // −tx/(1 − txz) · 1/(1 − txw)
        if p.t != 0.0 {
            push_geo(-p.t * x, p.t * x);
        }
    }
    for &y in &p.y {
        // −1/(z − y) · y/(w − y), both expanded in inverse powers
        let (f, tf) = pow(-1.0, y);
        let (g, tg) = pow(y, y);
        let f = series_window(0, f, tf, Tail::ZERO).reflect().shift(-1);
        let g = series_window(0, g, tg, Tail::ZERO).reflect().shift(-1);
        out.push((f, g));
    }
    if p.a != 0.0 {
        out.push((LaurentWindow::exact(0, vec![(1.0 - p.t) * p.a]), LaurentWindow::delta()));
    }
    if p.b != 0.0 {
        out.push((LaurentWindow::exact(-1, vec![-p.b]), LaurentWindow::exact(-1, vec![1.0])));
    }
    out
}

/// Checks `(d − e) K(d, e) = Σ_ν f_ν(d) g_ν(e)` on `lo..=hi`, where
/// `f_ν(d) = [z^d] 𝒥 F_ν` and `g_ν(e) = [w^{−e−1}] 𝒥̂ G_ν`.
pub fn iiks_decomposition_check(sym: &Symbol, lo: i64, hi: i64) -> Result<IiksReport> {
    let m = sym.window;
    let factors: Vec<(LaurentWindow<f64>, LaurentWindow<f64>)> = iiks_factors(&sym.params, m)
        .into_iter()
        .map(|(f, g)| (laurent_mul(&sym.j, &f), laurent_mul(&sym.jhat, &g)))
        .collect();
    let (mut max_residual, mut max_bound, mut worst_ratio) = (0.0f64, 0.0f64, 0.0f64);
    for d in lo..=hi {
        for e in lo..=hi {
            let k = sym.kernel_entry(d, e)?;
            let lhs = (d - e) as f64 * k.value;
            let mut bound = (d - e).abs() as f64 * (k.error + 8.0 * EPS * k.value.abs());
            let mut rhs = 0.0;
            for (jf, jg) in &factors {
                let (f, ef) = jf.coeff(d);
                let (g, eg) = jg.coeff(-e - 1);
                rhs += f * g;
                bound += f.abs() * eg + ef * g.abs() + ef * eg + 8.0 * EPS * (f * g).abs();
            }
            let res = (lhs - rhs).abs();
            if !bound.is_finite() {
                return Err(Error::Window("IIKS bound is not finite; enlarge the window".into()));
            }
            max_residual = max_residual.max(res);
            max_bound = max_bound.max(bound);
            if res > 0.0 {
                worst_ratio = worst_ratio.max(res / bound);
            }
        }
    }
    Ok(IiksReport {
        rank: factors.len(),
        lo,
        hi,
        max_residual,
        max_bound,
        worst_ratio,
        passed: worst_ratio <= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn half_half(t: f64) -> Symbol {
        symbol(&SymbolParams::finite(vec![0.5], vec![0.5], t), 60).unwrap()
    }

    // K(d,e) = [z^d w^{−e−1}] 𝒥(z)/(𝒥(w)(z−w)) on |z| = r₁ > |w| = r₂, trapezoid rule
    fn contour_kernel(p: &SymbolParams, d: i64, e: i64, n: usize) -> f64 {
        let (r1, r2) = test_radii(p);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let z = Complex64::from_polar(r1, 2.0 * std::f64::consts::PI * i as f64 / n as f64);
            let jz = p.eval_j(z) * z.powi(-(d as i32));
            for k in 0..n {
                let w = Complex64::from_polar(r2, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                acc += jz / p.eval_j(w) / (z - w) * w.powi(e as i32 + 1);
            }
        }
        acc.re / (n * n) as f64
    }

    #[test]
    fn vacuum() {
        let s = symbol(&SymbolParams::finite(vec![], vec![], 0.0), 20).unwrap();
        for d in -5..5 {
            for e in -5..5 {
                let k = s.kernel_entry(d, e).unwrap();
                let want = if d == e && d <= -1 { 1.0 } else { 0.0 };
                assert!((k.value - want).abs() <= k.error + 1e-15, "{d} {e} {k:?}");
            }
        }
        let g = gap_probability(&s, 0, 3).unwrap();
        assert_eq!(g.value, 1.0);
    }

    #[test]
    fn one_variable_anchor() {
        let s = half_half(0.0);
        let k = s.kernel_entry(-1, -1).unwrap();
        assert!((k.value - 0.75).abs() < 1e-12 && k.error < 1e-12, "{k:?}");
        let g = gap_probability(&s, 0, 40).unwrap();
        assert!((g.value - 0.75).abs() < 1e-12 && g.error() < 1e-10, "{g:?}");
    }

    #[test]
    fn plancherel_coefficients() {
        let (a, b, t) = (0.7, 1.3, -1.0);
        let s = symbol(&SymbolParams::plancherel(a, b, t), 40).unwrap();
        let c = (1.0 - t) * a;
        for n in -6i64..=6 {
            // Σ_k c^{n+k} (−b)^k / ((n+k)! k!)
            let mut want = 0.0;
            for k in 0..60i64 {
                if n + k < 0 {
                    continue;
                }
                let f = |m: i64| (1..=m).map(|i| i as f64).product::<f64>();
                want += c.powi((n + k) as i32) * (-b).powi(k as i32) / (f(n + k) * f(k));
            }
            let (v, e) = s.j().coeff(n);
            assert!((v - want).abs() <= e + 1e-14, "{n}: {v} {want} {e}");
        }
    }

    #[test]
    fn finite_coefficients_match_polynomial_product() {
        // (1/(1 − z/2))(1 − 1/(3z)): coefficient n ≥ 0 is 2^{−n} − 2^{−n−1}/3
        let s = symbol(&SymbolParams::finite(vec![0.5], vec![1.0 / 3.0], 0.0), 30).unwrap();
        for n in 0..10 {
            let want = 0.5f64.powi(n) - 0.5f64.powi(n + 1) / 3.0;
            let (v, e) = s.j().coeff(n as i64);
            assert!((v - want).abs() <= e + 1e-15);
        }
        let (v, _) = s.j().coeff(-1);
        assert!((v + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn windows_invert() {
        for t in [0.0, -1.0, -2.0] {
            let s = symbol(&SymbolParams::finite(vec![0.5, 0.25], vec![1.0 / 3.0], t), 60).unwrap();
            let prod = laurent_mul(s.j(), s.jhat());
            for n in -30..=30 {
                let (v, e) = prod.coeff(n);
                let want = if n == 0 { 1.0 } else { 0.0 };
                assert!((v - want).abs() <= e, "t={t} n={n}: {v} ± {e}");
            }
        }
    }

    #[test]
    fn product_formula_on_circle() {
        let p = SymbolParams::finite(vec![0.5], vec![0.3], -1.0);
        let s = symbol(&p, 80).unwrap();
        let (r1, r2) = test_radii(&p);
        for r in [r1, r2] {
            for i in 0..12 {
                let z = Complex64::from_polar(r, i as f64 * 0.5);
                assert!((s.j().eval(z) - p.eval_j(z)).norm() < 1e-10);
                assert!((s.jhat().eval(z) - 1.0 / p.eval_j(z)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn matches_contour_oracle() {
        for p in [
            SymbolParams::finite(vec![0.5, 0.25], vec![1.0 / 3.0], -2.0),
            SymbolParams { x: vec![0.3], y: vec![0.2, 0.4], t: -0.5, a: 0.4, b: 0.6 },
        ] {
            let s = symbol(&p, 60).unwrap();
            for d in -3..3 {
                for e in -3..3 {
                    let k = s.kernel_entry(d, e).unwrap();
                    let c = contour_kernel(&p, d, e, 128);
                    assert!((k.value - c).abs() < 1e-10, "{p:?} {d} {e}: {} vs {c}", k.value);
                }
            }
        }
    }

    #[test]
    fn correlation_matches_enumeration() {
        let tp = TSchurParams::new(vec![rat(1, 2), rat(1, 4)], vec![rat(1, 3)], rat(-1, 1)).unwrap();
        let s = symbol(&SymbolParams::from_tschur(&tp), 60).unwrap();
        for pts in [vec![0], vec![0, -1], vec![2, -2, -3], vec![1, -1]] {
            let x = PointSet::new(pts);
            let c = correlation(&s, &x).unwrap();
            let b = correlation_bruteforce(&tp, &x, 40).unwrap();
            assert!((c.value - b.value).abs() <= 1e-12 + c.error + b.tail_bound, "{x:?}");
        }
    }

    #[test]
    fn gap_distribution_sums_to_one() {
        let s = symbol(&SymbolParams::finite(vec![0.5, 0.25], vec![0.4], -1.0), 60).unwrap();
        let g: Vec<f64> = (0..25).map(|h| gap_probability(&s, h, 30).unwrap().value).collect();
        assert!(g.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!((g[24] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dp1_converges_quadratically() {
        let p = SymbolParams::finite(vec![0.4], vec![], 0.0);
        let grid = circle_grid(&p, 6);
        assert!(dp1_derivative_check(&p, &grid, 1e-4, 60).unwrap().max_residual < 1e-6);
        let r = dp1_refinement(&p, &grid, 1e-2, 60).unwrap();
        assert!((r.slope - 2.0).abs() < 0.2, "{r:?}");
    }

    #[test]
    fn iiks_small_cases() {
        for p in [
            SymbolParams::finite(vec![0.5], vec![], 0.0),
            SymbolParams::finite(vec![0.5], vec![0.4], -1.0),
            SymbolParams::finite(vec![0.5, 0.3], vec![0.4], -1.0),
        ] {
            let s = symbol(&p, 60).unwrap();
            let r = iiks_decomposition_check(&s, -3, 2).unwrap();
            assert!(r.passed, "{p:?} {r:?}");
            assert!(r.max_residual < 1e-10);
        }
    }

    #[test]
    fn hadamard_bound_dominates() {
        let a = vec![vec![2.0, 1.0], vec![0.5, 3.0]];
        let e = vec![vec![0.1, 0.1], vec![0.1, 0.1]];
        let worst = [[0.1, -0.1], [-0.1, 0.1]];
        let b: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| a[i][j] + worst[i][j]).collect()).collect();
        assert!((det_field(&b) - det_field(&a)).abs() <= det_perturbation_bound(&a, &e));
    }

    #[test]
    fn empty_annulus_rejected() {
        assert!(symbol(&SymbolParams::finite(vec![0.9], vec![0.9], -3.0), 10).is_err());
    }
}
