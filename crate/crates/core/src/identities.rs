//! Exact verification of the Cauchy-type identities for t-Schur functions.
//!
//! Both variable sets are scaled by one grading variable `u`, so `S_λ s_λ`
//! sits at grade `2|λ|`. Each verifier expands both sides as series in `u`
//! through grade `2D` and compares every coefficient as an exact rational.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{enumerate, EnumMode, Partition};
use crate::scalar::{format_rational, ratio_to_f64, Rational, Scalar};
use crate::series::{toeplitz_det, TruncatedSeries};
use crate::symfunc::{PowerSumSpec, SchurEvaluator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every compared coefficient agreed as a rational.
    ExactEqual,
    /// A floating check landed inside its certified interval.
    WithinBound,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub grade: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub t: String,
    pub degree_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    pub status: Status,
    pub grades_compared: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Mismatch
    }
}

fn fmt_list(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn compare(
    name: &str,
    x: &[Rational],
    y: &[Rational],
    t: &Rational,
    d: usize,
    truncation: Option<usize>,
    lhs: &TruncatedSeries<Rational>,
    rhs: &TruncatedSeries<Rational>,
) -> IdentityReport {
    let mut first = None;
    for g in 0..=2 * d {
        let (a, b) = (lhs.coeff(g), rhs.coeff(g));
        if a != b {
            first = Some(Mismatch { grade: g, lhs: format_rational(&a), rhs: format_rational(&b) });
            break;
        }
    }
    IdentityReport {
        identity: name.to_string(),
        x: fmt_list(x),
        y: fmt_list(y),
        t: format_rational(t),
        degree_cap: d,
        truncation,
        status: if first.is_none() { Status::ExactEqual } else { Status::Mismatch },
        grades_compared: 2 * d + 1,
        first_mismatch: first,
        detail: None,
    }
}

// Σ_{|λ|≤D, keep(λ)} S_λ(x;t)·s_{λ or λ'}(y)·sign·u^{2|λ|}
fn graded_sum(
    x: &[Rational],
    y: &[Rational],
    t: &Rational,
    d: usize,
    conjugate_y: bool,
    signed: bool,
    keep: impl Fn(&Partition) -> bool,
) -> Result<TruncatedSeries<Rational>> {
    let ex = SchurEvaluator::new(&PowerSumSpec::from_variables(x, d), t, d)?;
    let ey = SchurEvaluator::new(&PowerSumSpec::from_variables(y, d), &Rational::from_i64(0), d)?;
    let mut coeffs = vec![Rational::from_i64(0); 2 * d + 1];
    for l in enumerate(d, EnumMode::UpTo) {
        if !keep(&l) {
            continue;
        }
        let sy = if conjugate_y { ey.t_schur(&l.conjugate())? } else { ey.t_schur(&l)? };
        let mut v = ex.t_schur(&l)? * sy;
        if signed && l.size() % 2 == 1 {
            v = -v;
        }
        let g = 2 * l.size();
        coeffs[g] = coeffs[g].clone() + v;
    }
    Ok(TruncatedSeries::new(coeffs, 2 * d))
}

// ∏_{i,j} (1 − a·c u²)/(1 − b·c u²), c = x_i y_j
fn product_side(x: &[Rational], y: &[Rational], a: &Rational, b: &Rational, d: usize) -> TruncatedSeries<Rational> {
    let cap = 2 * d;
    let one = Rational::from_i64(1);
    let mut acc = TruncatedSeries::one_with_cap(cap);
    for xi in x {
        for yj in y {
            let c = xi.clone() * yj.clone();
            let num = TruncatedSeries::new(vec![one.clone(), Rational::from_i64(0), -(a.clone() * c.clone())], cap);
            let r = b.clone() * c;
            let mut geo = vec![Rational::from_i64(0); cap + 1];
            let mut pw = one.clone();
            for k in 0..=d {
                geo[2 * k] = pw.clone();
                pw *= r.clone();
            }
            acc = acc * num * TruncatedSeries::new(geo, cap);
        }
    }
    acc
}

/// `Σ S_λ(x;t) s_λ(y) = ∏ (1 − t x_i y_j)/(1 − x_i y_j)` through grade `2D`.
pub fn verify_t_cauchy(x: &[Rational], y: &[Rational], t: &Rational, d: usize) -> Result<IdentityReport> {
    let lhs = graded_sum(x, y, t, d, false, false, |_| true)?;
    let rhs = product_side(x, y, t, &Rational::from_i64(1), d);
    Ok(compare("t-cauchy", x, y, t, d, None, &lhs, &rhs))
}

/// `Σ (−1)^{|λ|} S_λ(x;t) s_{λ'}(y) = ∏ (1 − x_i y_j)/(1 − t x_i y_j)` through grade `2D`.
pub fn verify_dual_cauchy(x: &[Rational], y: &[Rational], t: &Rational, d: usize) -> Result<IdentityReport> {
    let lhs = graded_sum(x, y, t, d, true, true, |_| true)?;
    let rhs = product_side(x, y, &Rational::from_i64(1), t, d);
    Ok(compare("dual-cauchy", x, y, t, d, None, &lhs, &rhs))
}

/// `Σ_{ℓ(λ)≤k} S_λ s_λ = det T_k(φ)` with `φ(z) = H_{x,t}(z) H_y(1/z)`.
pub fn verify_gessel_length(x: &[Rational], y: &[Rational], t: &Rational, k: usize, d: usize) -> Result<IdentityReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let lhs = graded_sum(x, y, t, d, false, false, |l| l.len() <= k)?;
    let cap = 2 * d;
    let hx = SchurEvaluator::new(&PowerSumSpec::from_variables(x, cap), t, cap)?;
    let hy = SchurEvaluator::new(&PowerSumSpec::from_variables(y, cap), &Rational::from_i64(0), cap)?;
    // φ_m = Σ_n h^{(t)}_{n+m}(x) h_n(y) u^{2n+m}
    let symbol = |m: i64| {
        let mut c = vec![Rational::from_i64(0); cap + 1];
        for n in 0..=cap as i64 {
            let g = 2 * n + m;
            if n + m < 0 || g < 0 {
                continue;
            }
            if g as usize > cap {
                break;
            }
            c[g as usize] = c[g as usize].clone() + hx.h(n + m) * hy.h(n);
        }
        TruncatedSeries::new(c, cap)
    };
    let rhs: TruncatedSeries<Rational> = toeplitz_det(symbol, k);
    Ok(compare("gessel-length", x, y, t, d, Some(k), &lhs, &rhs.with_cap(cap)))
}

/// `Σ_{λ₁≤h} S_λ s_λ = det T_h(ψ)` with `ψ(z) = E_{x,t}(1/z) E_y(z)`.
pub fn verify_gessel_row(x: &[Rational], y: &[Rational], t: &Rational, h: usize, d: usize) -> Result<IdentityReport> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let lhs = graded_sum(x, y, t, d, false, false, |l| l.first_row() as usize <= h)?;
    let cap = 2 * d;
    let ex = SchurEvaluator::new(&PowerSumSpec::from_variables(x, cap), t, cap)?;
    let ey = SchurEvaluator::new(&PowerSumSpec::from_variables(y, cap), &Rational::from_i64(0), cap)?;
    // ψ_m = Σ_n e^{(t)}_n(x) e_{n+m}(y) u^{2n+m}
    let symbol = |m: i64| {
        let mut c = vec![Rational::from_i64(0); cap + 1];
        for n in 0..=cap as i64 {
            let g = 2 * n + m;
            if n + m < 0 || g < 0 {
                continue;
            }
            if g as usize > cap {
                break;
            }
            c[g as usize] = c[g as usize].clone() + ex.e(n) * ey.e(n + m);
        }
        TruncatedSeries::new(c, cap)
    };
    let rhs: TruncatedSeries<Rational> = toeplitz_det(symbol, h);
    Ok(compare("gessel-row", x, y, t, d, Some(h), &lhs, &rhs.with_cap(cap)))
}

/// `Z_t(x, y) = ∏ (1 − t x_i y_j)/(1 − x_i y_j)` as `f64` at scaled arguments.
fn z_scaled(x: &[f64], y: &[f64], t: f64, r: f64) -> f64 {
    let mut z = 1.0;
    for xi in x {
        for yj in y {
            let c = xi * yj * r * r;
            z *= (1.0 - t * c) / (1.0 - c);
        }
    }
    z
}

/// Checks `Σ_{|λ|≤D} P_t(λ) ∈ [1 − tail, 1]`.
///
/// For `t ≤ 0` every graded mass `W_g` is nonnegative, so for any `r ≥ 1` with
/// `r² max|x| max|y| < 1` the mass above `D` is at most `Z(rx, ry) / (Z(x, y) r^{2(D+1)})`;
/// the bound is minimized over a grid of `r`.
pub fn verify_measure_normalization(x: &[Rational], y: &[Rational], t: &Rational, d: usize) -> Result<IdentityReport> {
    if t > &Rational::from_i64(0) {
        return Err(Error::InvalidParameter("normalization needs t ≤ 0".into()));
    }
    let xf: Vec<f64> = x.iter().map(ratio_to_f64).collect();
    let yf: Vec<f64> = y.iter().map(ratio_to_f64).collect();
    let mx = xf.iter().cloned().fold(0.0, |a: f64, b| a.max(b.abs()));
    let my = yf.iter().cloned().fold(0.0, |a: f64, b| a.max(b.abs()));
    if mx * my >= 1.0 {
        return Err(Error::InvalidParameter("need |x_i y_j| < 1".into()));
    }
    let weights = graded_sum(x, y, t, d, false, false, |_| true)?;
    // Z as an exact rational
    let mut z = Rational::from_i64(1);
    let one = Rational::from_i64(1);
    for xi in x {
        for yj in y {
            let c = xi.clone() * yj.clone();
            z = z * (one.clone() - t.clone() * c.clone()) / (one.clone() - c);
        }
    }
    let mut partial = Rational::from_i64(0);
    for g in 0..=d {
        partial += weights.coeff(2 * g);
    }
    let partial = partial / z;
    let pf = ratio_to_f64(&partial);
    let tf = ratio_to_f64(t);
    let z0 = z_scaled(&xf, &yf, tf, 1.0);
    let tail = if mx * my == 0.0 {
        0.0
    } else {
        let rmax = 1.0 / (mx * my).sqrt();
        (0..400)
            .map(|i| 1.0 + (rmax - 1.0) * (i as f64 + 0.5) / 400.0)
            .map(|r| z_scaled(&xf, &yf, tf, r) / (z0 * r.powi(2 * (d as i32 + 1))))
            .fold(f64::INFINITY, f64::min)
    };
    let ok = pf <= 1.0 + 1e-15 && pf >= 1.0 - tail - 1e-15;
    Ok(IdentityReport {
        identity: "measure-normalization".into(),
        x: fmt_list(x),
        y: fmt_list(y),
        t: format_rational(t),
        degree_cap: d,
        truncation: None,
        status: if ok { Status::WithinBound } else { Status::Mismatch },
        grades_compared: d + 1,
        first_mismatch: None,
        detail: Some(format!("partial_sum={pf:.17e} tail_bound={tail:.3e}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn v(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn single_variable_grade_four() {
        let (x, y, t) = (v(&[(2, 3)]), v(&[(3, 5)]), rat(-2, 1));
        let lhs = graded_sum(&x, &y, &t, 2, false, false, |_| true).unwrap();
        let c = x[0].clone() * y[0].clone();
        assert_eq!(lhs.coeff(4), (rat(1, 1) - t.clone()) * c.pow_u(2));
        assert_eq!(product_side(&x, &y, &t, &rat(1, 1), 2).coeff(4), (rat(1, 1) - t) * c.pow_u(2));
    }

    #[test]
    fn classical_cases() {
        let (x, y) = (v(&[(1, 2), (1, 3)]), v(&[(1, 5), (-1, 7)]));
        assert!(verify_t_cauchy(&x, &y, &rat(0, 1), 6).unwrap().status == Status::ExactEqual);
        assert!(verify_dual_cauchy(&x, &y, &rat(0, 1), 6).unwrap().status == Status::ExactEqual);
    }

    #[test]
    fn listed_runs() {
        assert!(verify_t_cauchy(&v(&[(1, 2)]), &v(&[(1, 3)]), &rat(-1, 1), 8).unwrap().passed());
        assert!(verify_dual_cauchy(&v(&[(1, 2), (1, 4)]), &v(&[(1, 3)]), &rat(-1, 2), 8).unwrap().passed());
        assert!(verify_gessel_length(&v(&[(1, 2)]), &v(&[(1, 2)]), &rat(-1, 1), 2, 5).unwrap().passed());
        assert!(verify_gessel_row(&v(&[(1, 2)]), &v(&[(1, 3)]), &rat(-2, 1), 2, 5).unwrap().passed());
    }

    #[test]
    fn dual_cauchy_grade_two() {
        let (x, y, t) = (v(&[(1, 2), (1, 4)]), v(&[(1, 3)]), rat(-1, 2));
        let lhs = graded_sum(&x, &y, &t, 1, true, true, |_| true).unwrap();
        let p1x = rat(3, 4);
        let p1y = rat(1, 3);
        assert_eq!(lhs.coeff(2), -(rat(1, 1) - t) * p1x * p1y);
    }

    #[test]
    fn broken_identity_is_reported() {
        // compare the t-Cauchy sum against the wrong product
        let (x, y, t) = (v(&[(1, 2)]), v(&[(1, 3)]), rat(-1, 1));
        let lhs = graded_sum(&x, &y, &t, 3, false, false, |_| true).unwrap();
        let rhs = product_side(&x, &y, &rat(0, 1), &rat(1, 1), 3);
        let rep = compare("wrong", &x, &y, &t, 3, None, &lhs, &rhs);
        assert_eq!(rep.status, Status::Mismatch);
        assert_eq!(rep.first_mismatch.unwrap().grade, 2);
    }

    #[test]
    fn gessel_telescopes() {
        let (x, y, t) = (v(&[(1, 2), (1, 3)]), v(&[(2, 5), (1, 4)]), rat(-1, 1));
        let d = 6;
        for k in 1..=2usize {
            let ek = graded_sum(&x, &y, &t, d, false, false, |l| l.len() == k + 1).unwrap();
            let a = graded_sum(&x, &y, &t, d, false, false, |l| l.len() <= k).unwrap();
            let b = graded_sum(&x, &y, &t, d, false, false, |l| l.len() <= k + 1).unwrap();
            assert_eq!(b - a, ek);
            assert!(verify_gessel_length(&x, &y, &t, k, d).unwrap().passed());
            assert!(verify_gessel_length(&x, &y, &t, k + 1, d).unwrap().passed());
        }
    }

    #[test]
    fn normalization_examples() {
        let half = v(&[(1, 2)]);
        let rep = verify_measure_normalization(&half, &half, &rat(0, 1), 12).unwrap();
        assert_eq!(rep.status, Status::WithinBound, "{rep:?}");
        let rep = verify_measure_normalization(&half, &half, &rat(-1, 1), 12).unwrap();
        assert_eq!(rep.status, Status::WithinBound, "{rep:?}");
        let rep = verify_measure_normalization(&v(&[(0, 1)]), &half, &rat(-1, 1), 3).unwrap();
        assert!(rep.detail.unwrap().starts_with("partial_sum=1.0"));
        assert!(verify_measure_normalization(&half, &half, &rat(1, 2), 3).is_err());
    }
}
