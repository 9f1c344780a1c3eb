//! t-Schur measures and their Plancherel and z-measure specializations,
//! plus the sitewise matrix model that pushes forward to them under RSK.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::partition::{enumerate, ln_syt_count, EnumMode, Partition};
use crate::rsk::{rsk, AMatrix, Entry};
use crate::scalar::{ratio_to_f64, Rational, Scalar};
use crate::symfunc::{PowerSumSpec, SchurEvaluator};

/// Generator for replica `stream` of an experiment seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct TSchurParams {
    x: Vec<Rational>,
    y: Vec<Rational>,
    t: Rational,
    z: Rational,
}

impl TSchurParams {
    pub fn new(x: Vec<Rational>, y: Vec<Rational>, t: Rational) -> Result<Self> {
        let zero = Rational::from_i64(0);
        let one = Rational::from_i64(1);
        for v in x.iter().chain(&y) {
            if v < &zero || v >= &one {
                return Err(Error::InvalidParameter(format!("variable {v} outside [0,1)")));
            }
        }
        let mut z = one.clone();
        for xi in &x {
            for yj in &y {
                let c = xi.clone() * yj.clone();
                z = z * (one.clone() - t.clone() * c.clone()) / (one.clone() - c);
            }
        }
        Ok(TSchurParams { x, y, t, z })
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    /// `Z_t(x, y)`.
    pub fn partition_function(&self) -> &Rational {
        &self.z
    }

    /// Keeps the first `m` and `n` variables.
    pub fn truncate(&self, m: usize, n: usize) -> Result<Self> {
        if m > self.x.len() || n > self.y.len() {
            return Err(Error::InvalidParameter("not enough variables to truncate".into()));
        }
        TSchurParams::new(self.x[..m].to_vec(), self.y[..n].to_vec(), self.t.clone())
    }

    pub fn prob(&self, lambda: &Partition) -> Result<Rational> {
        let d = lambda.size().max(1);
        self.weights(d, |l| l == lambda).map(|mut v| v.pop().map(|p| p.1).unwrap_or_default())
    }

    /// `ℙ_t(λ)` for every `|λ| ≤ d`, in enumeration order.
    pub fn probs_up_to(&self, d: usize) -> Result<Vec<(Partition, Rational)>> {
        self.weights(d, |_| true)
    }

    fn weights(&self, d: usize, keep: impl Fn(&Partition) -> bool) -> Result<Vec<(Partition, Rational)>> {
        let ex = SchurEvaluator::new(&PowerSumSpec::from_variables(&self.x, d), &self.t, d)?;
        let ey = SchurEvaluator::new(&PowerSumSpec::from_variables(&self.y, d), &Rational::from_i64(0), d)?;
        let zero = Rational::from_i64(0);
        let mut out = Vec::new();
        for l in enumerate(d, EnumMode::UpTo) {
            if !keep(&l) {
                continue;
            }
            // s_λ(y) vanishes beyond len(y) rows; skip the determinant
            let p = if l.len() > self.y.len() {
                zero.clone()
            } else {
                ex.t_schur(&l)? * ey.t_schur(&l)? / self.z.clone()
            };
            if p < zero {
                return Err(Error::InvalidParameter(format!("negative weight at {l}")));
            }
            out.push((l, p));
        }
        Ok(out)
    }

    /// `x_i y_j` as floats.
    pub fn q_matrix(&self) -> Vec<Vec<f64>> {
        self.x
            .iter()
            .map(|xi| self.y.iter().map(|yj| ratio_to_f64(&(xi.clone() * yj.clone()))).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TPlancherelParams {
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

impl TPlancherelParams {
    pub fn new(a: f64, b: f64, t: f64) -> Result<Self> {
        let p = TPlancherelParams { a, b, t };
        if !(a > 0.0 && b > 0.0 && t <= 0.0 && p.kappa() > 0.0) {
            return Err(Error::InvalidParameter("need a, b > 0 and t ≤ 0".into()));
        }
        Ok(p)
    }

    /// Balanced parameters with the given `κ`.
    pub fn with_kappa(kappa: f64, t: f64) -> Result<Self> {
        let a = (kappa / (1.0 - t)).sqrt();
        TPlancherelParams::new(a, a, t)
    }

    pub fn kappa(&self) -> f64 {
        (1.0 - self.t) * self.a * self.b
    }
}

/// `e^{−κ} κ^{|λ|} (f^λ)² / (|λ|!)²`, evaluated in log space.
pub fn plancherel_prob(params: &TPlancherelParams, lambda: &Partition) -> f64 {
    let k = params.kappa();
    let n = lambda.size() as f64;
    (-k + n * k.ln() + 2.0 * ln_syt_count(lambda) - 2.0 * ln_gamma(n + 1.0)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TZParams {
    pub z: f64,
    pub zp: f64,
    pub xi: f64,
    pub t: f64,
}

impl TZParams {
    pub fn new(z: f64, zp: f64, xi: f64, t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&xi) || t > 0.0 {
            return Err(Error::InvalidParameter("need ξ ∈ [0,1) and t ≤ 0".into()));
        }
        Ok(TZParams { z, zp, xi, t })
    }

    /// `((1 − tξ)/(1 − ξ))^{zz'}`.
    pub fn normalization(&self) -> f64 {
        ((1.0 - self.t * self.xi) / (1.0 - self.xi)).powf(self.z * self.zp)
    }

    /// Integer `z, z'`: the measure is the t-Schur measure with `z × z'` sites of weight `ξ`.
    pub fn q_matrix(&self) -> Option<Vec<Vec<f64>>> {
        let int = |v: f64| v >= 0.0 && v.fract() == 0.0;
        (int(self.z) && int(self.zp)).then(|| vec![vec![self.xi; self.zp as usize]; self.z as usize])
    }
}

/// Evaluates `S_λ(1^z;t) s_λ(1^{z'})` for all `|λ| ≤ d`.
pub struct TzEvaluator {
    params: TZParams,
    ex: SchurEvaluator<f64>,
    ey: SchurEvaluator<f64>,
}

impl TzEvaluator {
    pub fn new(params: TZParams, d: usize) -> Result<Self> {
        let d = d.max(1);
        Ok(TzEvaluator {
            params,
            ex: SchurEvaluator::new(&PowerSumSpec::principal(params.z, d), &params.t, d)?,
            ey: SchurEvaluator::new(&PowerSumSpec::principal(params.zp, d), &0.0, d)?,
        })
    }

    /// May be negative outside the positivity regime; callers flag that.
    pub fn prob(&self, lambda: &Partition) -> Result<f64> {
        let w = self.ex.t_schur(lambda)? * self.ey.t_schur(lambda)?;
        Ok(w * self.params.xi.powi(lambda.size() as i32) / self.params.normalization())
    }
}

pub fn tz_prob(params: &TZParams, lambda: &Partition) -> Result<f64> {
    TzEvaluator::new(*params, lambda.size())?.prob(lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedMass {
    pub degree_cap: usize,
    pub mass: f64,
    pub tail_bound: f64,
    pub negative_values: usize,
    pub within_bound: bool,
}

/// `Σ_{|λ|≤D}` of the t-z-measure with the bound `Z(rξ)/(Z(ξ) r^{D+1})` on the rest.
pub fn tz_truncated_mass(params: &TZParams, d: usize) -> Result<TruncatedMass> {
    let ev = TzEvaluator::new(*params, d)?;
    let mut mass = 0.0;
    let mut negative_values = 0;
    for l in enumerate(d, EnumMode::UpTo) {
        let p = ev.prob(&l)?;
        // vanishing weights come out as roundoff of either sign
        if p < -1e-13 {
            negative_values += 1;
        }
        mass += p;
    }
    let tail = if params.xi == 0.0 {
        0.0
    } else {
        let rmax = 1.0 / params.xi;
        let z0 = params.normalization();
        (0..400)
            .map(|i| 1.0 + (rmax - 1.0) * (i as f64 + 0.5) / 400.0)
            .map(|r| TZParams { xi: params.xi * r, ..*params }.normalization() / (z0 * r.powi(d as i32 + 1)))
            .fold(f64::INFINITY, f64::min)
    };
    let within_bound = negative_values == 0 && mass <= 1.0 + 1e-12 && mass >= 1.0 - tail - 1e-12;
    Ok(TruncatedMass { degree_cap: d, mass, tail_bound: tail, negative_values, within_bound })
}

/// One matrix from the sitewise law with site weights `q_ij = x_i y_j`:
/// zero with probability `(1 − q)/(1 − tq)`, otherwise a geometric magnitude
/// `ℙ(k) = (1 − q) q^{k−1}` carrying a prime with probability `−t/(1 − t)`.
pub fn sample_matrix_q<R: Rng>(q: &[Vec<f64>], t: f64, rng: &mut R) -> Result<AMatrix> {
    if t > 0.0 {
        return Err(Error::InvalidParameter("matrix model needs t ≤ 0".into()));
    }
    let prime = -t / (1.0 - t);
    let rows = q
        .iter()
        .map(|row| {
            row.iter()
                .map(|&qij| {
                    if !(0.0..1.0).contains(&qij) {
                        return Err(Error::InvalidParameter(format!("site weight {qij} outside [0,1)")));
                    }
                    let u: f64 = rng.random();
                    if qij == 0.0 || u < (1.0 - qij) / (1.0 - t * qij) {
                        return Ok(Entry::new(0, false));
                    }
                    let g: f64 = 1.0 - rng.random::<f64>();
                    let k = 1 + (g.ln() / qij.ln()).floor() as u32;
                    let p = rng.random::<f64>() < prime;
                    Ok(Entry::new(k, p))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    AMatrix::new(rows)
}

pub fn sample_matrix_model<R: Rng>(m: usize, n: usize, params: &TSchurParams, rng: &mut R) -> Result<AMatrix> {
    let p = params.truncate(m, n)?;
    sample_matrix_q(&p.q_matrix(), ratio_to_f64(p.t()), rng)
}

const CHUNKS: u64 = 64;

/// Shape histogram of `trials` RSK images; chunking is fixed, so counts do not
/// depend on the thread count.
pub fn shape_histogram(
    q: &[Vec<f64>],
    t: f64,
    trials: u64,
    seed: u64,
) -> Result<(BTreeMap<Partition, u64>, u64)> {
    let parts: Vec<Result<(BTreeMap<Partition, u64>, u64)>> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let lo = trials * c / CHUNKS;
            let hi = trials * (c + 1) / CHUNKS;
            let mut h = BTreeMap::new();
            let mut marks = 0u64;
            for _ in lo..hi {
                let a = sample_matrix_q(q, t, &mut rng)?;
                let (s, _) = rsk(&a);
                marks += s.mark() as u64;
                *h.entry(s.shape()).or_insert(0) += 1;
            }
            Ok((h, marks))
        })
        .collect();
    let mut hist = BTreeMap::new();
    let mut marks = 0;
    for p in parts {
        let (h, m) = p?;
        marks += m;
        for (k, v) in h {
            *hist.entry(k).or_insert(0) += v;
        }
    }
    Ok((hist, marks))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeRow {
    pub shape: Partition,
    pub count: u64,
    pub prob: f64,
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Chi-square over the given cells plus one cell for everything else.
/// Cells with expectation below 5 are merged into the remainder.
pub fn chi_square(rows: &[(u64, f64)], trials: u64) -> ChiSquareResult {
    let n = trials as f64;
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut rest_obs, mut rest_p) = (trials as f64, 1.0);
    for &(obs, p) in rows {
        if n * p >= 5.0 {
            stat += (obs as f64 - n * p).powi(2) / (n * p);
            cells += 1;
            rest_obs -= obs as f64;
            rest_p -= p;
        }
    }
    if n * rest_p >= 5.0 {
        stat += (rest_obs - n * rest_p).powi(2) / (n * rest_p);
        cells += 1;
    }
    let df = cells.saturating_sub(1).max(1);
    let p_value = ChiSquared::new(df as f64).map(|d| 1.0 - d.cdf(stat)).unwrap_or(f64::NAN);
    ChiSquareResult { statistic: stat, df, p_value }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushforwardReport {
    pub m: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub degree_cap: usize,
    pub rows: Vec<ShapeRow>,
    pub max_abs_z: f64,
    pub chi_square: ChiSquareResult,
    pub total_marks: u64,
    pub passed: bool,
}

/// Compares RSK shapes of sampled matrices with `ℙ_t(λ)` on `|λ| ≤ D`:
/// every shape with expected count ≥ 25 within 4σ and chi-square `p > 10⁻³`.
pub fn pushforward_check(
    m: usize,
    n: usize,
    params: &TSchurParams,
    trials: u64,
    d: usize,
    seed: u64,
) -> Result<PushforwardReport> {
    let p = params.truncate(m, n)?;
    let probs = p.probs_up_to(d)?;
    let (hist, total_marks) = shape_histogram(&p.q_matrix(), ratio_to_f64(p.t()), trials, seed)?;
    let nt = trials as f64;
    let mut rows = Vec::new();
    let mut max_abs_z: f64 = 0.0;
    for (shape, pr) in probs {
        let pf = ratio_to_f64(&pr);
        let count = hist.get(&shape).copied().unwrap_or(0);
        let sd = (nt * pf * (1.0 - pf)).sqrt();
        let z = if sd > 0.0 { (count as f64 - nt * pf) / sd } else { 0.0 };
        if nt * pf >= 25.0 {
            max_abs_z = max_abs_z.max(z.abs());
        }
        rows.push(ShapeRow { shape, count, prob: pf, z_score: z });
    }
    let cells: Vec<(u64, f64)> = rows.iter().map(|r| (r.count, r.prob)).collect();
    let chi = chi_square(&cells, trials);
    let passed = max_abs_z <= 4.0 && chi.p_value > 1e-3;
    Ok(PushforwardReport {
        m,
        n,
        trials,
        seed,
        degree_cap: d,
        rows,
        max_abs_z,
        chi_square: chi,
        total_marks,
        passed,
    })
}

/// Pushforward check for the t-z-measure with integer `z, z'`: `z × z'` sites of weight `ξ`.
pub fn tz_pushforward_check(params: &TZParams, trials: u64, d: usize, seed: u64) -> Result<PushforwardReport> {
    let q = params
        .q_matrix()
        .ok_or_else(|| Error::InvalidParameter("matrix model needs integer z and z'".into()))?;
    let ev = TzEvaluator::new(*params, d)?;
    let (hist, total_marks) = shape_histogram(&q, params.t, trials, seed)?;
    let nt = trials as f64;
    let mut rows = Vec::new();
    let mut max_abs_z: f64 = 0.0;
    for shape in enumerate(d, EnumMode::UpTo) {
        let pf = ev.prob(&shape)?.max(0.0);
        let count = hist.get(&shape).copied().unwrap_or(0);
        let sd = (nt * pf * (1.0 - pf)).sqrt();
        let z = if sd > 0.0 { (count as f64 - nt * pf) / sd } else { 0.0 };
        if nt * pf >= 25.0 {
            max_abs_z = max_abs_z.max(z.abs());
        }
        rows.push(ShapeRow { shape, count, prob: pf, z_score: z });
    }
    let cells: Vec<(u64, f64)> = rows.iter().map(|r| (r.count, r.prob)).collect();
    let chi = chi_square(&cells, trials);
    let passed = max_abs_z <= 4.0 && chi.p_value > 1e-3;
    Ok(PushforwardReport {
        m: params.z as usize,
        n: params.zp as usize,
        trials,
        seed,
        degree_cap: d,
        rows,
        max_abs_z,
        chi_square: chi,
        total_marks,
        passed,
    })
}
