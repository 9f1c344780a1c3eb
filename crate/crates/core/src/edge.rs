//! Edge asymptotics: Airy functions and kernel, Tracy–Widom F₂, the discrete
//! Bessel kernel of the Plancherel specialization, saddle constants for the
//! rectangular specialization, and checks of the scaling limits.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{Bounded, KernelWindow};
use crate::measure::TPlancherelParams;
use crate::series::det_field;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;
const SQRT_PI: f64 = 1.772_453_850_905_516_f64;

/// Range on which [`airy`] is guaranteed to absolute accuracy `1e-10`.
pub const AIRY_RANGE: (f64, f64) = (-12.0, 40.0);

fn airy_series(x: f64) -> (f64, f64) {
    // Ai = Ai(0) f + Ai'(0) g with f = Σ a_k, g = Σ b_k
    let x3 = x * x * x;
    let (mut a, mut b) = (1.0, x);
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    // f' = Σ 3k a_k / x, g' = Σ (3k+1) b_k / x, built from x² factors to avoid dividing by x
    let (mut ap, mut bp) = (1.0, 1.0);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        a *= x3 / ((k3 - 1.0) * k3);
        b *= x3 / (k3 * (k3 + 1.0));
        // ap_k = 3k a_k / x, bp_k = (3k+1) b_k / x
        ap = if k == 1 { x * x / 2.0 } else { ap * x3 / ((k3 - 3.0) * (k3 - 1.0)) };
        bp *= x3 / ((k3 - 2.0) * k3);
        f += a;
        g += b;
        fp += ap;
        gp += bp;
        if a.abs() + b.abs() < 1e-18 * (f.abs() + g.abs()) && k > 3 {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

// u_k and v_k of the asymptotic expansions, up to the smallest term
fn uv_coeffs(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..=n {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

fn airy_asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = uv_coeffs(40);
    let (mut su, mut sv) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += s * term;
        sv += s * v[k] / zeta.powi(k as i32);
    }
    let e = (-zeta).exp();
    (e / (2.0 * SQRT_PI * x.powf(0.25)) * su, -x.powf(0.25) * e / (2.0 * SQRT_PI) * sv)
}

fn airy_asymptotic_neg(x: f64) -> (f64, f64) {
    let ax = -x;
    let zeta = 2.0 / 3.0 * ax.powf(1.5);
    let (u, v) = uv_coeffs(40);
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pu += s * term;
            pv += s * v[k] / zeta.powi(k as i32);
        } else {
            qu += s * term;
            qv += s * v[k] / zeta.powi(k as i32);
        }
    }
    let ph = zeta - std::f64::consts::FRAC_PI_4;
    let (s, c) = ph.sin_cos();
    let ai = (c * pu + s * qu) / (SQRT_PI * ax.powf(0.25));
    let aip = ax.powf(0.25) / SQRT_PI * (s * pv - c * qv);
    (ai, aip)
}

/// `(Ai(x), Ai'(x))`: Maclaurin series on `[−7, 5]`, asymptotic expansions outside.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !(AIRY_RANGE.0..=AIRY_RANGE.1).contains(&x) {
        return Err(Error::InvalidParameter(format!("Airy argument {x} outside supported range")));
    }
    Ok(if x > 5.0 {
        airy_asymptotic_pos(x)
    } else if x < -7.0 {
        airy_asymptotic_neg(x)
    } else {
        airy_series(x)
    })
}

pub fn airy(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.0)
}

pub fn airy_prime(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.1)
}

/// `(Ai(x)Ai'(y) − Ai'(x)Ai(y))/(x − y)`, with `Ai'(x)² − x Ai(x)²` on the diagonal.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let (ax, apx) = airy_pair(x)?;
    if x == y {
        return Ok(apx * apx - x * ax * ax);
    }
    let (ay, apy) = airy_pair(y)?;
    Ok((ax * apy - apx * ay) / (x - y))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let n = q as f64;
    for i in 0..q.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=q {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if q == 0 { 1.0 } else { p1 };
            dp = n * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    (nodes, weights)
}

/// `F₂(s) = det(I − K_Airy)` on `[s, ∞)`, by Nyström with `q` Gauss–Legendre nodes on `[s, s + T]`,
/// `T = max(16, 8 − s)`; the kernel's trace beyond `s + T ≥ 8` is below `10⁻¹²`.
pub fn tw2_cdf(s: f64, q: usize) -> Result<f64> {
    let len = 16.0f64.max(8.0 - s);
    let (u, w) = gauss_legendre(q);
    let x: Vec<f64> = u.iter().map(|v| s + (v + 1.0) * len / 2.0).collect();
    let sw: Vec<f64> = w.iter().map(|v| (v * len / 2.0).sqrt()).collect();
    let ai: Vec<(f64, f64)> = x.iter().map(|&v| airy_pair(v)).collect::<Result<_>>()?;
    let mut m = vec![vec![0.0; q]; q];
    for i in 0..q {
        for j in 0..q {
            let k = if i == j {
                ai[i].1 * ai[i].1 - x[i] * ai[i].0 * ai[i].0
            } else {
                (ai[i].0 * ai[j].1 - ai[i].1 * ai[j].0) / (x[i] - x[j])
            };
            m[i][j] = if i == j { 1.0 } else { 0.0 } - sw[i] * k * sw[j];
        }
    }
    Ok(det_field(&m))
}

/// Median of F₂ by bisection.
pub fn tw2_median(q: usize) -> Result<f64> {
    let (mut lo, mut hi) = (-4.0, 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tw2_cdf(mid, q)? < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `J_0(x) … J_{nmax}(x)` by Miller's backward recurrence, normalized by `J₀ + 2ΣJ_{2k} = 1`.
pub fn bessel_j_all(x: f64, nmax: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return v;
    }
    let start = nmax.max(x as usize) + 40 + (10.0 * x.cbrt()) as usize;
    let start = start + start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start + 1] = 0.0;
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(nmax + 1);
    vals.iter().map(|v| v / norm).collect()
}

/// The balanced discrete Bessel kernel `K(d, e) = Σ_{r≥0} J_{d+r+1}(2√κ) J_{e+r+1}(2√κ)`.
#[derive(Clone, Debug)]
pub struct BesselKernel {
    kappa: f64,
    j: Vec<f64>,
}

impl BesselKernel {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter("need κ > 0".into()));
        }
        let x = 2.0 * kappa.sqrt();
        let nmax = (x + 40.0 + 15.0 * x.cbrt()).ceil() as usize;
        Ok(BesselKernel { kappa, j: bessel_j_all(x, nmax) })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    // J_n with J_{−n} = (−1)^n J_n; zero beyond the table
    fn jn(&self, n: i64) -> f64 {
        let a = n.unsigned_abs() as usize;
        let v = self.j.get(a).copied().unwrap_or(0.0);
        if n < 0 && a % 2 == 1 {
            -v
        } else {
            v
        }
    }

    pub fn entry(&self, d: i64, e: i64) -> Bounded {
        let top = self.j.len() as i64;
        let (mut s, mut abs) = (0.0, 0.0);
        let mut r = 0i64;
        while d + r + 1 < top || e + r + 1 < top {
            let v = self.jn(d + r + 1) * self.jn(e + r + 1);
            s += v;
            abs += v.abs();
            r += 1;
        }
        // the table ends where |J_n| is far below 1e-17
        Bounded { value: s, error: 64.0 * f64::EPSILON * (abs + 1.0) }
    }
}

/// The kernel of `exp((1−t) a z − b/z)`: `K(d, e) = c^{e−d} K_bal(d, e)` with `c = √(b/((1−t) a))`.
pub fn plancherel_kernel(params: &TPlancherelParams, lo: i64, hi: i64) -> Result<KernelWindow> {
    let bk = BesselKernel::new(params.kappa())?;
    let c = (params.b / ((1.0 - params.t) * params.a)).sqrt();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (lo..=hi)
        .into_par_iter()
        .map(|d| {
            (lo..=hi)
                .map(|e| {
                    let b = bk.entry(d, e);
                    let f = c.powi((e - d) as i32);
                    (b.value * f, b.error * f)
                })
                .unzip()
        })
        .collect();
    let (values, errors) = rows.into_iter().unzip();
    Ok(KernelWindow { lo, hi, values, errors, symbol_window: bk.j.len() })
}

/// `det(I − K)` of a Plancherel kernel on the labels `h..=h+L`.
pub fn plancherel_gap(params: &TPlancherelParams, h: i64, l: usize) -> Result<f64> {
    let kw = plancherel_kernel(params, h, h + l as i64)?;
    let n = l + 1;
    let m: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|k| if i == k { 1.0 } else { 0.0 } - kw.values[i][k]).collect()).collect();
    Ok(det_field(&m))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeGridReport {
    /// `kappa` or `n`.
    pub scaling: String,
    pub scale: f64,
    pub grid: Vec<f64>,
    pub max_deviation: f64,
    /// Largest `|scaled K(ξ, −η)|` over grid values `ξ, η > 0`: first argument above the edge, second below.
    pub mixed_plus_minus: f64,
    pub mixed_minus_plus: f64,
    /// `max |K_Airy(ξ, −η)|` over the same pairs, for comparison with the mixed blocks.
    pub airy_mixed_reference: f64,
    /// Largest distance between a grid value and its lattice-exact coordinate.
    pub lattice_shift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minor_deviation: Option<f64>,
}

// Scaled kernel sampled at lattice points, compared with Airy at the lattice-exact coordinates.
fn grid_report(
    scaling: &str,
    scale: f64,
    grid: &[f64],
    center: f64,
    width: f64,
    kernel: impl Fn(i64, i64) -> f64 + Sync,
    minor_grid: Option<&[f64]>,
) -> Result<EdgeGridReport> {
    let label = |v: f64| (center + width * v - 0.5).round() as i64;
    let coord = |d: i64| (d as f64 + 0.5 - center) / width;
    let scaled = |d: i64, e: i64| width * kernel(d, e);
    let mut dev: f64 = 0.0;
    let (mut pm, mut mp, mut reference, mut shift): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for &x in grid {
        for &y in grid {
            let (d, e) = (label(x), label(y));
            dev = dev.max((scaled(d, e) - airy_kernel(coord(d), coord(e))?).abs());
            shift = shift.max((coord(d) - x).abs());
            if x > 0.0 && y > 0.0 {
                let (dn, en) = (label(-x), label(-y));
                pm = pm.max(scaled(d, en).abs());
                mp = mp.max(scaled(dn, e).abs());
                reference = reference.max(airy_kernel(coord(d), coord(en))?.abs());
            }
        }
    }
    let minor_deviation = match minor_grid {
        None => None,
        Some(mg) => {
            let mut worst: f64 = 0.0;
            for &x1 in mg {
                for &x2 in mg {
                    let ds = [label(x1), label(x2)];
                    let km: Vec<Vec<f64>> = ds.iter().map(|&a| ds.iter().map(|&b| scaled(a, b)).collect()).collect();
                    let am: Vec<Vec<f64>> = ds
                        .iter()
                        .map(|&a| ds.iter().map(|&b| airy_kernel(coord(a), coord(b))).collect::<Result<Vec<_>>>())
                        .collect::<Result<_>>()?;
                    worst = worst.max((det_field(&km) - det_field(&am)).abs());
                }
            }
            Some(worst)
        }
    };
    Ok(EdgeGridReport {
        scaling: scaling.into(),
        scale,
        grid: grid.to_vec(),
        max_deviation: dev,
        mixed_plus_minus: pm,
        mixed_minus_plus: mp,
        airy_mixed_reference: reference,
        lattice_shift: shift,
        minor_deviation,
    })
}

/// `κ^{1/6} K̃(2√κ + ξκ^{1/6}, 2√κ + ηκ^{1/6})` against `K_Airy(ξ, η)` for each `κ`,
/// with balanced parameters `a = b` at the given `t` and `K̃(d, e) = z₀^{d−e} K(d, e)`, `z₀ = (1−t)^{−1/2}`.
pub fn bessel_to_airy_check(kappas: &[f64], t: f64, grid: &[f64]) -> Result<Vec<EdgeGridReport>> {
    kappas
        .iter()
        .map(|&kappa| {
            let p = TPlancherelParams::with_kappa(kappa, t)?;
            let bk = BesselKernel::new(kappa)?;
            let c = (p.b / ((1.0 - p.t) * p.a)).sqrt();
            let z0 = 1.0 / (1.0 - t).sqrt();
            let k = |d: i64, e: i64| c.powi((e - d) as i32) * bk.entry(d, e).value * z0.powi((d - e) as i32);
            grid_report("kappa", kappa, grid, 2.0 * kappa.sqrt(), kappa.powf(1.0 / 6.0), k, None)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SaddleData {
    pub alpha: f64,
    pub tau: f64,
    pub t: f64,
    pub z0: f64,
    /// `z₀ σ'(z₀)`.
    pub c1: f64,
    /// `−z₀² σ''(z₀)`, equal to `c1` at a double saddle.
    pub c1_alt: f64,
    pub c2: f64,
    pub phi1_residual: f64,
    pub phi2_residual: f64,
}

struct Sigma {
    a: f64,
    tau: f64,
    t: f64,
}

impl Sigma {
    fn d1(&self, z: f64) -> f64 {
        let Sigma { a, tau, t } = *self;
        tau * (a / (1.0 - a * z) - t * a / (1.0 - t * a * z)) + 1.0 / (z - a) - 1.0 / z
    }
    fn d2(&self, z: f64) -> f64 {
        let Sigma { a, tau, t } = *self;
        tau * (a * a / (1.0 - a * z).powi(2) - t * t * a * a / (1.0 - t * a * z).powi(2)) - 1.0 / (z - a).powi(2)
            + 1.0 / (z * z)
    }
    fn d3(&self, z: f64) -> f64 {
        let Sigma { a, tau, t } = *self;
        tau * (2.0 * a.powi(3) / (1.0 - a * z).powi(3) - 2.0 * (t * a).powi(3) / (1.0 - t * a * z).powi(3))
            + 2.0 / (z - a).powi(3)
            - 2.0 / z.powi(3)
    }
    // derivative of g = z σ'
    fn g1(&self, z: f64) -> f64 {
        self.d1(z) + z * self.d2(z)
    }
    fn g2(&self, z: f64) -> f64 {
        2.0 * self.d2(z) + z * self.d3(z)
    }
}

/// Solves `Φ' = Φ'' = 0` for `Φ = σ − c₁ log z`: `z₀` is the critical point of `z σ'(z)` on `(α, 1/α)`,
/// `c₁ = z₀ σ'(z₀)` and `c₂ = z₀ (Φ'''(z₀)/2)^{1/3}`.
pub fn saddle_constants(alpha: f64, tau: f64, t: f64) -> Result<SaddleData> {
    if !(alpha > 0.0 && alpha < 1.0 && tau > 0.0 && t <= 0.0) {
        return Err(Error::InvalidParameter("need α ∈ (0,1), τ > 0, t ≤ 0".into()));
    }
    let s = Sigma { a: alpha, tau, t };
    let (mut lo, mut hi) = (alpha * (1.0 + 1e-12), (1.0 / alpha) * (1.0 - 1e-12));
    if !(s.g1(lo) < 0.0 && s.g1(hi) > 0.0) {
        return Err(Error::InvalidParameter("no double saddle in (α, 1/α)".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if s.g1(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mut z0 = 0.5 * (lo + hi);
    for _ in 0..3 {
        let step = s.g1(z0) / s.g2(z0);
        if (z0 - step) > alpha && (z0 - step) < 1.0 / alpha {
            z0 -= step;
        }
    }
    let c1 = z0 * s.d1(z0);
    let c1_alt = -z0 * z0 * s.d2(z0);
    let phi3 = s.d3(z0) - 2.0 * c1 / z0.powi(3);
    if phi3 <= 0.0 {
        return Err(Error::InvalidParameter("third derivative at the saddle is not positive".into()));
    }
    Ok(SaddleData {
        alpha,
        tau,
        t,
        z0,
        c1,
        c1_alt,
        c2: z0 * (phi3 / 2.0).cbrt(),
        phi1_residual: (s.d1(z0) - c1 / z0).abs(),
        phi2_residual: (s.d2(z0) + c1 / (z0 * z0)).abs(),
    })
}

/// Kernel of `x = (α^m)`, `y = (α^n)` by double-contour trapezoid quadrature:
/// `K(d, e) = ∮∮ 𝒥(z)/𝒥(w) · z^{−d−1} w^e / (z − w)`, with `|z| = z₀(1+δ)` and `w` on the
/// circle about `α` through `z₀(1−δ)`. Returned values are conjugated, `K̃ = z₀^{d−e} K`.
pub struct RectKernel {
    pub n: usize,
    pub m: usize,
    pub saddle: SaddleData,
    z: Vec<Complex64>,
    w: Vec<Complex64>,
    lz: Vec<Complex64>,
    lw: Vec<Complex64>,
    dz: Vec<Complex64>,
    dw: Vec<Complex64>,
}

impl RectKernel {
    pub fn new(n: usize, alpha: f64, tau: f64, t: f64, nodes: usize) -> Result<Self> {
        let saddle = saddle_constants(alpha, tau, t)?;
        let m = (tau * n as f64).round() as usize;
        let z0 = saddle.z0;
        let room = (1.0 - alpha / z0).min(1.0 / (alpha * z0 * t.abs().max(1.0)) - 1.0);
        let delta = (2.0 / (saddle.c2 * (n as f64).cbrt())).min(0.5 * room);
        let rz = z0 * (1.0 + delta);
        let rw = z0 * (1.0 - delta) - alpha;
        let pole = if t < 0.0 { -1.0 / (t.abs() * alpha) } else { f64::NEG_INFINITY };
        if rw <= 0.0 || rz * alpha >= 1.0 || alpha - rw <= pole || rz * t.abs() * alpha >= 1.0 {
            return Err(Error::InvalidParameter("contours do not fit the analytic region".into()));
        }
        let log_j = |u: Complex64| {
            let one = Complex64::new(1.0, 0.0);
            m as f64 * ((one - t * alpha * u) / (one - alpha * u)).ln() + n as f64 * (one - alpha / u).ln()
        };
        let h = 2.0 * std::f64::consts::PI / nodes as f64;
        let mut rk = RectKernel { n, m, saddle, z: vec![], w: vec![], lz: vec![], lw: vec![], dz: vec![], dw: vec![] };
        for i in 0..nodes {
            let e = Complex64::from_polar(1.0, h * (i as f64 + 0.5));
            let z = rz * e;
            let w = alpha + rw * e;
            rk.lz.push(log_j(z));
            rk.lw.push(log_j(w));
            rk.dz.push(Complex64::i() * z * h);
            rk.dw.push(Complex64::i() * rw * e * h);
            rk.z.push(z);
            rk.w.push(w);
        }
        Ok(rk)
    }

    /// Conjugated entries for all pairs of `ds × es`, sharing the Cauchy matrix.
    pub fn entries(&self, ds: &[i64], es: &[i64]) -> Vec<Vec<f64>> {
        let z0 = self.saddle.z0;
        let q = self.z.len();
        // B_k(e) = w^e z₀^{−e} / 𝒥(w) dw, then CB(e) = Σ_k B_k / (z_i − w_k)
        let cb: Vec<Vec<Complex64>> = es
            .par_iter()
            .map(|&e| {
                let b: Vec<Complex64> =
                    (0..q).map(|k| (-self.lw[k] + e as f64 * (self.w[k] / z0).ln()).exp() * self.dw[k]).collect();
                (0..q).map(|i| (0..q).map(|k| b[k] / (self.z[i] - self.w[k])).sum()).collect()
            })
            .collect();
        let norm = -4.0 * std::f64::consts::PI * std::f64::consts::PI;
        ds.iter()
            .map(|&d| {
                let a: Vec<Complex64> = (0..q)
                    .map(|i| (self.lz[i] - (d + 1) as f64 * (self.z[i] / z0).ln()).exp() * self.dz[i] / z0)
                    .collect();
                cb.iter().map(|c| (a.iter().zip(c).map(|(x, y)| x * y).sum::<Complex64>() / norm).re).collect()
            })
            .collect()
    }

    pub fn entry(&self, d: i64, e: i64) -> f64 {
        self.entries(&[d], &[e])[0][0]
    }
}

/// Scaled conjugated kernel at `c₁n + c₂n^{1/3}ξ` against the Airy kernel, for each `n`;
/// includes the 2×2 minor deviation on `minor_grid`.
pub fn rect_edge_check(
    ns: &[usize],
    alpha: f64,
    tau: f64,
    t: f64,
    grid: &[f64],
    minor_grid: &[f64],
) -> Result<Vec<EdgeGridReport>> {
    ns.iter()
        .map(|&n| {
            let rk = RectKernel::new(n, alpha, tau, t, 512)?;
            let s = rk.saddle;
            let nf = n as f64;
            let center = s.c1 * nf;
            let width = s.c2 * nf.cbrt();
            // tabulate every label the report can touch
            let label = |v: f64| (center + width * v - 0.5).round() as i64;
            let mut labels: Vec<i64> = grid
                .iter()
                .chain(minor_grid)
                .flat_map(|&v| [label(v), label(-v)])
                .collect();
            labels.sort_unstable();
            labels.dedup();
            let table = rk.entries(&labels, &labels);
            let idx = |d: i64| labels.binary_search(&d).expect("tabulated label");
            let k = |d: i64, e: i64| table[idx(d)][idx(e)];
            grid_report("n", nf, grid, center, width, k, Some(minor_grid))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TzLimitRow {
    pub z: f64,
    pub zp: f64,
    pub xi: f64,
    pub kappa: f64,
    pub max_deviation: f64,
    /// `log Z / ((1−t) κ)`.
    pub normalization_ratio: f64,
}

/// `max_u |𝒥_{z,z',ξ}(u) − exp((1−t)√κ u − √κ/u)|` over `points` on the unit circle, `κ = zz'ξ`.
pub fn tz_limit_check(sequence: &[(f64, f64, f64)], t: f64, points: usize) -> Result<Vec<TzLimitRow>> {
    sequence
        .iter()
        .map(|&(z, zp, xi)| {
            let sx = xi.sqrt();
            if !(0.0..1.0).contains(&xi) || sx * t.abs() >= 1.0 {
                return Err(Error::InvalidParameter("unit circle outside the annulus".into()));
            }
            let kappa = z * zp * xi;
            let sk = kappa.sqrt();
            let one = Complex64::new(1.0, 0.0);
            let mut worst: f64 = 0.0;
            for i in 0..points {
                let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / points as f64);
                let j = (z * ((one - t * sx * u) / (one - sx * u)).ln() + zp * (one - sx / u).ln()).exp();
                let lim = ((1.0 - t) * sk * u - sk / u).exp();
                worst = worst.max((j - lim).norm());
            }
            let log_z = z * zp * ((1.0 - t * xi) / (1.0 - xi)).ln();
            Ok(TzLimitRow { z, zp, xi, kappa, max_deviation: worst, normalization_ratio: log_z / ((1.0 - t) * kappa) })
        })
        .collect()
}
