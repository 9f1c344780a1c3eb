//! Integer partitions, conjugation, hook lengths and Frobenius-type point sets.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Serializes as a JSON array of parts, e.g. `[3,1,1]`. Trailing zeros are
/// dropped on construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has an interior zero")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_i` with 1-based `i`; zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn first_row(&self) -> u32 {
        self.part(1)
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.first_row() as usize;
        let mut out = vec![0u32; w];
        for &p in &self.0 {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition(out)
    }

    /// Cells `(row, col)`, 0-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (0..p as usize).map(move |c| (r, c)))
    }

    /// Hook length of the 0-based cell `(r, c)`.
    pub fn hook(&self, r: usize, c: usize) -> u32 {
        let arm = self.0[r] - c as u32 - 1;
        let leg = self.0[r + 1..].iter().take_while(|&&p| p as usize > c).count() as u32;
        arm + leg + 1
    }

    /// Whether the diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Accepts `[3,1,1]`, `3,1,1`, `3 1 1` and `[]`.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Which weights `enumerate` returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumMode {
    /// Exactly `N` boxes.
    Exact,
    /// At most `N` boxes, listed by increasing weight.
    UpTo,
}

/// Partitions of `n` (or of every weight `≤ n`) in reverse lexicographic order
/// within each weight.
pub fn enumerate(n: usize, mode: EnumMode) -> Vec<Partition> {
    enumerate_bounded(n, mode, usize::MAX)
}

/// Like [`enumerate`] but keeps only partitions with at most `max_len` parts.
pub fn enumerate_bounded(n: usize, mode: EnumMode, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let weights: Vec<usize> = match mode {
        EnumMode::Exact => vec![n],
        EnumMode::UpTo => (0..=n).collect(),
    };
    for w in weights {
        let mut cur = Vec::new();
        rec(w, w, max_len, &mut cur, &mut out);
    }
    out
}

fn rec(rest: usize, max_part: usize, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    if cur.len() == max_len {
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        cur.push(p as u32);
        rec(rest - p, p, max_len, cur, out);
        cur.pop();
    }
}

/// Number of standard Young tableaux of shape `λ`, by the hook length formula.
pub fn syt_count(lambda: &Partition) -> BigUint {
    let n = lambda.size();
    let mut num = BigUint::one();
    for k in 2..=n {
        num *= k as u64;
    }
    let mut den = BigUint::one();
    for (r, c) in lambda.cells() {
        den *= lambda.hook(r, c) as u64;
    }
    num / den
}

/// `ln f^λ` in floating point; usable for shapes too large for exact factorials.
pub fn ln_syt_count(lambda: &Partition) -> f64 {
    let n = lambda.size();
    let lnfact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    let lnhooks: f64 = lambda.cells().map(|(r, c)| (lambda.hook(r, c) as f64).ln()).sum();
    lnfact - lnhooks
}

/// A finite set of integer labels `d`; the point itself sits at `d + 1/2`.
///
/// Stored in decreasing order. `depth` records how many rows produced the set
/// when it came from [`frobenius_points`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<i64>,
    pub depth: Option<usize>,
}

impl PointSet {
    pub fn new(mut points: Vec<i64>) -> Self {
        points.sort_unstable_by(|a, b| b.cmp(a));
        points.dedup();
        PointSet { points, depth: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Half-integer coordinates `d + 1/2`.
    pub fn coordinates(&self) -> Vec<f64> {
        self.points.iter().map(|&d| d as f64 + 0.5).collect()
    }
}

/// `{λ_i − i : 1 ≤ i ≤ depth}` as integer labels. Needs `depth ≥ ℓ(λ)`.
pub fn frobenius_points(lambda: &Partition, depth: usize) -> Result<PointSet> {
    if depth < lambda.len() {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} is smaller than the length {} of {lambda}",
            lambda.len()
        )));
    }
    let points = (1..=depth).map(|i| lambda.part(i) as i64 - i as i64).collect();
    Ok(PointSet { points, depth: Some(depth) })
}

/// Whether every label in `xs` is of the form `λ_i − i` for some `i ≥ 1`.
pub fn contains_points(lambda: &Partition, xs: &[i64]) -> bool {
    let l = lambda.len() as i64;
    xs.iter().all(|&x| {
        if x < -l {
            return true;
        }
        (1..=lambda.len()).any(|i| lambda.part(i) as i64 - i as i64 == x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    // Euler's pentagonal recurrence, independent of the enumerator.
    fn euler_count(n: usize) -> Vec<u64> {
        let mut pc = vec![0i64; n + 1];
        pc[0] = 1;
        for m in 1..=n {
            let mut s = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                s += sign * pc[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    s += sign * pc[m - g2];
                }
                k += 1;
            }
            pc[m] = s;
        }
        pc.into_iter().map(|v| v as u64).collect()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate(4, EnumMode::Exact).len(), 5);
        assert_eq!(
            enumerate(4, EnumMode::Exact),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
        assert_eq!(enumerate(0, EnumMode::Exact), vec![Partition::empty()]);
        assert_eq!(enumerate(3, EnumMode::UpTo).len(), 1 + 1 + 2 + 3);
        assert_eq!(enumerate_bounded(6, EnumMode::Exact, 2).len(), 4);
    }

    #[test]
    fn counts_match_pentagonal_recurrence() {
        let ec = euler_count(40);
        for n in 0..=40 {
            assert_eq!(enumerate(n, EnumMode::Exact).len() as u64, ec[n], "n = {n}");
        }
        assert_eq!(ec[40], 37338);
    }

    #[test]
    fn syt_examples() {
        assert_eq!(syt_count(&p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(syt_count(&p(&[3, 2])), BigUint::from(5u32));
        assert_eq!(syt_count(&p(&[3, 2, 1])), BigUint::from(16u32));
        assert_eq!(syt_count(&Partition::empty()), BigUint::from(1u32));
    }

    #[test]
    fn sum_of_squares_of_syt_counts() {
        // Σ (f^λ)² = N!
        for n in 0..=10usize {
            let s: BigUint = enumerate(n, EnumMode::Exact).iter().map(|l| syt_count(l).pow(2)).sum();
            let fact: BigUint = (1..=n as u64).product::<u64>().into();
            assert_eq!(s, fact);
        }
    }

    #[test]
    fn frobenius_examples() {
        let l = p(&[3, 1]);
        assert_eq!(l.conjugate(), p(&[2, 1, 1]));
        assert_eq!(frobenius_points(&l, 3).unwrap().points, vec![2, -1, -3]);
        assert!(frobenius_points(&l, 1).is_err());
        assert!(contains_points(&l, &[2, -1, -7]));
        assert!(!contains_points(&l, &[0]));
        assert!(contains_points(&Partition::empty(), &[-1, -2]));
        assert!(!contains_points(&Partition::empty(), &[0]));
    }

    #[test]
    fn particle_hole_duality_exhaustive() {
        for n in 0..=10 {
            for l in enumerate(n, EnumMode::Exact) {
                let k = l.len().max(l.first_row() as usize).max(1);
                let a = frobenius_points(&l, k).unwrap().points;
                let b = frobenius_points(&l.conjugate(), k).unwrap().points;
                let mut mirrored: Vec<i64> = (-(k as i64)..k as i64)
                    .filter(|x| !a.contains(x))
                    .map(|x| -1 - x)
                    .collect();
                mirrored.sort_unstable_by(|x, y| y.cmp(x));
                assert_eq!(mirrored, b, "λ = {l}");
            }
        }
    }

    #[test]
    fn serde_and_parse_round_trip() {
        let l = p(&[3, 1, 1]);
        assert_eq!(l.to_string(), "[3,1,1]");
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), l);
        assert_eq!("3 1 1".parse::<Partition>().unwrap(), l);
        assert!("[1,3]".parse::<Partition>().is_err());
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1u32..8, 0..8).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(l in arb_partition()) {
            prop_assert_eq!(l.conjugate().conjugate(), l.clone());
            prop_assert_eq!(l.conjugate().size(), l.size());
        }

        #[test]
        fn points_are_strictly_decreasing(l in arb_partition(), extra in 0usize..5) {
            let ps = frobenius_points(&l, l.len() + extra).unwrap();
            prop_assert!(ps.points.windows(2).all(|w| w[0] > w[1]));
            prop_assert!(contains_points(&l, &ps.points));
        }

        #[test]
        fn hook_formula_agrees_with_log_form(l in arb_partition()) {
            let f = syt_count(&l);
            let lf: f64 = f.to_string().parse::<f64>().unwrap().ln();
            prop_assert!((lf - ln_syt_count(&l)).abs() < 1e-9);
        }
    }
}
