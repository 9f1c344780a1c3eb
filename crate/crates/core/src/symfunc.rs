//! Specializations of symmetric functions through power sums, the t-deformed
//! complete and elementary functions, and t-Schur evaluations.
//!
//! `H_{x,t}(z) = ∏(1 − t x_i z)/(1 − x_i z) = exp(Σ (1 − t^k) p_k z^k / k)` and
//! `E_{x,t}(z) = ∏(1 + x_i z)/(1 + t x_i z)`. The t-Schur function is
//! `S_λ(x;t) = det(h^{(t)}_{λ_i−i+j}) = det(e^{(t)}_{λ'_i−i+j})`.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rsk::MarkedLetter;
use crate::scalar::Scalar;
use crate::series::{det_field, TruncatedSeries};

/// Where a power-sum specialization came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Origin<S> {
    /// Finitely many variables `x_1..x_m`.
    Variables(Vec<S>),
    /// `p_k = z` for every `k`.
    Principal(S),
    /// Arbitrary power-sum values.
    Free,
}

/// Values `p_1..p_D` of the power sums.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumSpec<S> {
    p: Vec<S>,
    origin: Origin<S>,
}

impl<S: Scalar> PowerSumSpec<S> {
    pub fn from_variables(xs: &[S], cap: usize) -> Self {
        let mut p = Vec::with_capacity(cap);
        let mut pw: Vec<S> = xs.to_vec();
        for _ in 0..cap {
            p.push(pw.iter().fold(S::zero(), |a, b| a + b.clone()));
            for (w, x) in pw.iter_mut().zip(xs) {
                *w = w.clone() * x.clone();
            }
        }
        PowerSumSpec { p, origin: Origin::Variables(xs.to_vec()) }
    }

    pub fn principal(z: S, cap: usize) -> Self {
        PowerSumSpec { p: vec![z.clone(); cap], origin: Origin::Principal(z) }
    }

    /// `p_k = a·δ_{k1}`.
    pub fn plancherel(a: S, cap: usize) -> Self {
        let mut p = vec![S::zero(); cap];
        if cap > 0 {
            p[0] = a;
        }
        PowerSumSpec { p, origin: Origin::Free }
    }

    /// `p_1..p_D` given directly.
    pub fn from_power_sums(p: Vec<S>) -> Self {
        PowerSumSpec { p, origin: Origin::Free }
    }

    pub fn cap(&self) -> usize {
        self.p.len()
    }

    pub fn origin(&self) -> &Origin<S> {
        &self.origin
    }

    /// `p_k` for `1 ≤ k ≤ D`.
    pub fn p(&self, k: usize) -> S {
        self.p[k - 1].clone()
    }

    pub fn variables(&self) -> Option<&[S]> {
        match &self.origin {
            Origin::Variables(v) => Some(v),
            _ => None,
        }
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.cap() {
            Err(Error::Truncation(format!("degree {n} exceeds power-sum capacity {}", self.cap())))
        } else {
            Ok(())
        }
    }
}

/// `h^{(t)}_0..h^{(t)}_{n_max}` as a series capped at `n_max`.
pub fn h_t<S: Scalar>(spec: &PowerSumSpec<S>, t: &S, n_max: usize) -> Result<TruncatedSeries<S>> {
    spec.check_cap(n_max)?;
    let mut l = vec![S::zero(); n_max + 1];
    let mut tk = S::one();
    for (k, lk) in l.iter_mut().enumerate().skip(1) {
        tk = tk * t.clone();
        *lk = (S::one() - tk.clone()) * spec.p(k) / S::from_i64(k as i64);
    }
    TruncatedSeries::new(l, n_max).exp()
}

/// `e^{(t)}_0..e^{(t)}_{n_max}` as a series capped at `n_max`.
pub fn e_t<S: Scalar>(spec: &PowerSumSpec<S>, t: &S, n_max: usize) -> Result<TruncatedSeries<S>> {
    spec.check_cap(n_max)?;
    let mut l = vec![S::zero(); n_max + 1];
    let mut tk = S::one();
    for (k, lk) in l.iter_mut().enumerate().skip(1) {
        tk = tk * t.clone();
        let v = (S::one() - tk.clone()) * spec.p(k) / S::from_i64(k as i64);
        *lk = if k % 2 == 1 { v } else { -v };
    }
    TruncatedSeries::new(l, n_max).exp()
}

/// Precomputed `h^{(t)}` and `e^{(t)}` for repeated t-Schur evaluations.
#[derive(Clone, Debug)]
pub struct SchurEvaluator<S> {
    h: TruncatedSeries<S>,
    e: TruncatedSeries<S>,
    cap: usize,
}

impl<S: Scalar> SchurEvaluator<S> {
    pub fn new(spec: &PowerSumSpec<S>, t: &S, cap: usize) -> Result<Self> {
        Ok(SchurEvaluator { h: h_t(spec, t, cap)?, e: e_t(spec, t, cap)?, cap })
    }

    pub fn h(&self, m: i64) -> S {
        if m < 0 {
            S::zero()
        } else {
            self.h.coeff(m as usize)
        }
    }

    pub fn e(&self, m: i64) -> S {
        if m < 0 {
            S::zero()
        } else {
            self.e.coeff(m as usize)
        }
    }

    fn check(&self, lambda: &Partition) -> Result<()> {
        if lambda.size() > self.cap {
            Err(Error::Truncation(format!("|λ| = {} exceeds capacity {}", lambda.size(), self.cap)))
        } else {
            Ok(())
        }
    }

    /// `det(h^{(t)}_{λ_i−i+j})`.
    pub fn t_schur(&self, lambda: &Partition) -> Result<S> {
        self.check(lambda)?;
        Ok(jacobi_trudi(lambda, |m| self.h(m)))
    }

    /// `det(e^{(t)}_{λ'_i−i+j})`.
    pub fn t_schur_dual(&self, lambda: &Partition) -> Result<S> {
        self.check(lambda)?;
        Ok(jacobi_trudi(&lambda.conjugate(), |m| self.e(m)))
    }
}

fn jacobi_trudi<S: Scalar>(lambda: &Partition, f: impl Fn(i64) -> S) -> S {
    let l = lambda.len();
    let m: Vec<Vec<S>> = (1..=l)
        .map(|i| (1..=l).map(|j| f(lambda.part(i) as i64 - i as i64 + j as i64)).collect())
        .collect();
    det_field(&m)
}

/// `S_λ(x;t)` by the h-form Jacobi–Trudi determinant.
pub fn t_schur<S: Scalar>(spec: &PowerSumSpec<S>, t: &S, lambda: &Partition) -> Result<S> {
    spec.check_cap(lambda.size())?;
    SchurEvaluator::new(spec, t, lambda.size())?.t_schur(lambda)
}

/// `S_λ(x;t)` by the e-form determinant over `λ'`.
pub fn t_schur_dual<S: Scalar>(spec: &PowerSumSpec<S>, t: &S, lambda: &Partition) -> Result<S> {
    spec.check_cap(lambda.size())?;
    SchurEvaluator::new(spec, t, lambda.size())?.t_schur_dual(lambda)
}

/// Ordinary Schur function `s_λ = S_λ(·;0)`.
pub fn schur<S: Scalar>(spec: &PowerSumSpec<S>, lambda: &Partition) -> Result<S> {
    t_schur(spec, &S::zero(), lambda)
}

/// Largest `|λ|` accepted by the tableau enumeration.
pub const TABLEAU_ORACLE_MAX_SIZE: usize = 8;
/// Largest number of variables accepted by the tableau enumeration.
pub const TABLEAU_ORACLE_MAX_VARS: usize = 3;

/// `Σ (−t)^{mark(S)} x^S` over marked tableaux of shape `λ` in the letters
/// `1' < 1 < 2' < 2 < …` (one letter pair per variable).
///
/// A marked tableau is weakly increasing along rows and columns, each row holds
/// at most one `k'` and each column at most one unmarked `k`.
pub fn t_schur_tableau_oracle<S: Scalar>(xs: &[S], t: &S, lambda: &Partition) -> Result<S> {
    if lambda.size() > TABLEAU_ORACLE_MAX_SIZE || xs.len() > TABLEAU_ORACLE_MAX_VARS {
        return Err(Error::InvalidParameter(format!(
            "tableau enumeration is limited to |λ| ≤ {TABLEAU_ORACLE_MAX_SIZE} and ≤ {TABLEAU_ORACLE_MAX_VARS} variables"
        )));
    }
    let cells: Vec<(usize, usize)> = lambda.cells().collect();
    let alphabet: Vec<MarkedLetter> = (1..=xs.len() as u32)
        .flat_map(|v| [MarkedLetter::marked(v), MarkedLetter::plain(v)])
        .collect();
    let mut grid: Vec<Vec<Option<MarkedLetter>>> =
        lambda.parts().iter().map(|&p| vec![None; p as usize]).collect();
    let mut total = S::zero();
    fill(0, &cells, &alphabet, &mut grid, xs, t, &mut total);
    Ok(total)
}

fn fill<S: Scalar>(
    idx: usize,
    cells: &[(usize, usize)],
    alphabet: &[MarkedLetter],
    grid: &mut Vec<Vec<Option<MarkedLetter>>>,
    xs: &[S],
    t: &S,
    total: &mut S,
) {
    if idx == cells.len() {
        let mut w = S::one();
        for row in grid.iter() {
            for a in row.iter().flatten() {
                w = w * xs[a.value as usize - 1].clone();
                if a.marked {
                    w = -(w * t.clone());
                }
            }
        }
        *total = total.clone() + w;
        return;
    }
    let (r, c) = cells[idx];
    for &a in alphabet {
        if c > 0 {
            let left = grid[r][c - 1].unwrap();
            if left > a || (left == a && a.marked) {
                continue;
            }
        }
        if r > 0 {
            let up = grid[r - 1][c].unwrap();
            if up > a || (up == a && !a.marked) {
                continue;
            }
        }
        grid[r][c] = Some(a);
        fill(idx + 1, cells, alphabet, grid, xs, t, total);
        grid[r][c] = None;
    }
}

/// Coefficient of `x_1⋯x_N` in `S_λ(x_1..x_N;t)`, `N = |λ|`, by inclusion–exclusion
/// over how many variables are set to `1` (the rest to `0`).
pub fn squarefree_coefficient<S: Scalar>(lambda: &Partition, t: &S) -> Result<S> {
    let n = lambda.size();
    let mut total = S::zero();
    let mut binom = 1i64;
    for j in 0..=n {
        if j > 0 {
            binom = binom * (n - j + 1) as i64 / j as i64;
        }
        let spec = PowerSumSpec::from_variables(&vec![S::one(); j], n);
        let v = t_schur(&spec, t, lambda)? * S::from_i64(binom);
        total = if (n - j).is_multiple_of(2) { total + v } else { total - v };
    }
    Ok(total)
}
