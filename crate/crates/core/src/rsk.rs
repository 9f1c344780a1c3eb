//! RSK correspondence over the marked alphabet `1' < 1 < 2' < 2 < …`.
//!
//! An unmarked letter `α` bumps the leftmost entry `γ > α` of a row, a marked
//! letter bumps the leftmost `γ ≥ α`. A matrix entry of magnitude `k` in cell
//! `(i, j)` contributes `k` pairs `(j, i)` to the biword. How a marked entry is
//! encoded is selected by [`MarkedEntries`]: the default writes one `(j, i')`
//! followed by `k − 1` copies of `(j, i)`, which keeps `mark(S) = mark(A)` and a
//! semistandard recording tableau. [`MarkedEntries::Repeated`] writes `k` copies of
//! `(j, i')`; [`convention_gate`] shows where that breaks.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A letter `k` or `k'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MarkedLetter {
    pub value: u32,
    pub marked: bool,
}

impl MarkedLetter {
    pub fn plain(value: u32) -> Self {
        MarkedLetter { value, marked: false }
    }

    pub fn marked(value: u32) -> Self {
        MarkedLetter { value, marked: true }
    }

    // 1' → 1, 1 → 2, 2' → 3, ...
    fn rank(&self) -> u64 {
        2 * self.value as u64 - self.marked as u64
    }
}

impl Ord for MarkedLetter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for MarkedLetter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.marked {
            write!(f, "{}'", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

impl FromStr for MarkedLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, marked) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let value: u32 = body.parse().map_err(|_| Error::Parse(format!("bad letter {s:?}")))?;
        if value == 0 {
            return Err(Error::Parse("letters start at 1".into()));
        }
        Ok(MarkedLetter { value, marked })
    }
}

impl Serialize for MarkedLetter {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MarkedLetter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One matrix entry: magnitude `v` and prime flag `p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub v: u32,
    #[serde(default)]
    pub p: bool,
}

impl Entry {
    pub fn new(v: u32, p: bool) -> Self {
        Entry { v, p }
    }
}

/// An `m × n` matrix over `𝒜 ∪ {0}`. Serializes as an array of rows of entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Entry>>", into = "Vec<Vec<Entry>>")]
pub struct AMatrix {
    rows: Vec<Vec<Entry>>,
}

impl AMatrix {
    pub fn new(rows: Vec<Vec<Entry>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|e| e.p && e.v == 0) {
            return Err(Error::InvalidParameter("a zero entry cannot be primed".into()));
        }
        Ok(AMatrix { rows })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        AMatrix { rows: vec![vec![Entry::default(); n]; m] }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// Entry in 0-based row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> Entry {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Entry) {
        self.rows[i][j] = e;
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    /// Number of primed entries.
    pub fn mark(&self) -> usize {
        self.rows.iter().flatten().filter(|e| e.p).count()
    }

    /// `u_i = Σ_j |a_ij|`.
    pub fn row_sums(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.iter().map(|e| e.v).sum()).collect()
    }

    /// `s_j = Σ_i |a_ij|`.
    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.n()).map(|j| self.rows.iter().map(|r| r[j].v).sum()).collect()
    }

    pub fn total(&self) -> u32 {
        self.row_sums().iter().sum()
    }
}

impl TryFrom<Vec<Vec<Entry>>> for AMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Entry>>) -> Result<Self> {
        AMatrix::new(rows)
    }
}

impl From<AMatrix> for Vec<Vec<Entry>> {
    fn from(a: AMatrix) -> Self {
        a.rows
    }
}

/// A filling of a Young diagram by marked letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarkedTableau {
    rows: Vec<Vec<MarkedLetter>>,
}

impl MarkedTableau {
    pub fn new(rows: Vec<Vec<MarkedLetter>>) -> Self {
        MarkedTableau { rows }
    }

    pub fn rows(&self) -> &[Vec<MarkedLetter>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(|r| r.len() as u32).collect())
            .expect("tableau rows are weakly decreasing in length")
    }

    pub fn mark(&self) -> usize {
        self.rows.iter().flatten().filter(|a| a.marked).count()
    }

    /// Number of letters with value `k` (marked or not), indexed by `k − 1`.
    pub fn content(&self, len: usize) -> Vec<u32> {
        let mut c = vec![0u32; len];
        for a in self.rows.iter().flatten() {
            if (a.value as usize) <= len {
                c[a.value as usize - 1] += 1;
            }
        }
        c
    }

    /// Checks weak increase along rows and columns, at most one `k'` per row and
    /// at most one unmarked `k` per column.
    pub fn is_valid(&self) -> bool {
        if self.rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return false;
        }
        for row in &self.rows {
            for w in row.windows(2) {
                if w[0] > w[1] || (w[0] == w[1] && w[0].marked) {
                    return false;
                }
            }
        }
        for r in 1..self.rows.len() {
            for (c, &a) in self.rows[r].iter().enumerate() {
                let up = self.rows[r - 1][c];
                if up > a || (up == a && !a.marked) {
                    return false;
                }
            }
        }
        true
    }
}

/// A filling of a Young diagram by positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordingTableau {
    rows: Vec<Vec<u32>>,
}

impl RecordingTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Self {
        RecordingTableau { rows }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(|r| r.len() as u32).collect())
            .expect("tableau rows are weakly decreasing in length")
    }

    pub fn rows_weakly_increasing(&self) -> bool {
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]))
    }

    pub fn columns_strictly_increasing(&self) -> bool {
        (1..self.rows.len())
            .all(|r| self.rows[r].iter().enumerate().all(|(c, &v)| self.rows[r - 1][c] < v))
    }

    pub fn is_semistandard(&self) -> bool {
        self.rows_weakly_increasing() && self.columns_strictly_increasing()
    }

    pub fn content(&self, len: usize) -> Vec<u32> {
        let mut c = vec![0u32; len];
        for &v in self.rows.iter().flatten() {
            if (v as usize) <= len {
                c[v as usize - 1] += 1;
            }
        }
        c
    }
}

/// How a marked matrix entry of magnitude `k` becomes biword pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkedEntries {
    /// One `(j, i')` and `k − 1` copies of `(j, i)`.
    #[default]
    SinglePrime,
    /// `k` copies of `(j, i')`.
    Repeated,
}

/// Order of letters sharing the same top entry `β`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieOrder {
    /// Increasing in the letter order.
    #[default]
    Increasing,
    /// Marked letters first in decreasing order, then unmarked letters increasing.
    MarkedDescending,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RskConvention {
    pub marked_entries: MarkedEntries,
    pub ties: TieOrder,
}

impl RskConvention {
    pub const ALL: [RskConvention; 4] = [
        RskConvention { marked_entries: MarkedEntries::SinglePrime, ties: TieOrder::Increasing },
        RskConvention { marked_entries: MarkedEntries::SinglePrime, ties: TieOrder::MarkedDescending },
        RskConvention { marked_entries: MarkedEntries::Repeated, ties: TieOrder::Increasing },
        RskConvention { marked_entries: MarkedEntries::Repeated, ties: TieOrder::MarkedDescending },
    ];
}

/// Two-line array of pairs `(β, α)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biword {
    pub pairs: Vec<(u32, MarkedLetter)>,
}

impl Biword {
    /// The lower row `w_A`.
    pub fn word(&self) -> Vec<MarkedLetter> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn tie_cmp(ties: TieOrder, a: &MarkedLetter, b: &MarkedLetter) -> Ordering {
    match ties {
        TieOrder::Increasing => a.cmp(b),
        TieOrder::MarkedDescending => match (a.marked, b.marked) {
            (true, true) => b.cmp(a),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => a.cmp(b),
        },
    }
}

/// Biword of `A`: top row `β = j` (column, 1-based), bottom row `α` from row `i`.
pub fn biword_with(a: &AMatrix, conv: RskConvention) -> Biword {
    let mut pairs = Vec::new();
    for i in 0..a.m() {
        for j in 0..a.n() {
            let e = a.get(i, j);
            let (beta, val) = (j as u32 + 1, i as u32 + 1);
            for c in 0..e.v {
                let marked = match conv.marked_entries {
                    MarkedEntries::SinglePrime => e.p && c == 0,
                    MarkedEntries::Repeated => e.p,
                };
                pairs.push((beta, MarkedLetter { value: val, marked }));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| tie_cmp(conv.ties, &x.1, &y.1)));
    Biword { pairs }
}

pub fn biword(a: &AMatrix) -> Biword {
    biword_with(a, RskConvention::default())
}

/// Row-inserts `α`; returns the 0-based `(row, col)` of the new cell.
pub fn insert(t: &mut MarkedTableau, alpha: MarkedLetter) -> (usize, usize) {
    let mut x = alpha;
    let mut r = 0;
    loop {
        if r == t.rows.len() {
            t.rows.push(vec![x]);
            return (r, 0);
        }
        let row = &mut t.rows[r];
        let pos = if x.marked {
            row.partition_point(|g| *g < x)
        } else {
            row.partition_point(|g| *g <= x)
        };
        if pos == row.len() {
            row.push(x);
            return (r, pos);
        }
        std::mem::swap(&mut row[pos], &mut x);
        r += 1;
    }
}

/// RSK with the default convention.
pub fn rsk(a: &AMatrix) -> (MarkedTableau, RecordingTableau) {
    rsk_with(a, RskConvention::default())
}

pub fn rsk_with(a: &AMatrix, conv: RskConvention) -> (MarkedTableau, RecordingTableau) {
    let bw = biword_with(a, conv);
    let mut s = MarkedTableau::default();
    let mut u = RecordingTableau::default();
    for (beta, alpha) in bw.pairs {
        let (r, _) = insert(&mut s, alpha);
        if r == u.rows.len() {
            u.rows.push(Vec::new());
        }
        u.rows[r].push(beta);
    }
    (s, u)
}

// Undo one insertion ending at the last cell of row `r`; returns the ejected letter.
fn uninsert(s: &mut MarkedTableau, r: usize) -> MarkedLetter {
    let mut g = s.rows[r].pop().expect("row is nonempty");
    if s.rows[r].is_empty() {
        s.rows.pop();
    }
    for rr in (0..r).rev() {
        let row = &mut s.rows[rr];
        // rightmost entry that could have bumped g
        let p = if g.marked {
            row.partition_point(|a| *a <= g)
        } else {
            row.partition_point(|a| *a < g)
        };
        let p = p.checked_sub(1).expect("a bumping letter exists in a valid tableau");
        std::mem::swap(&mut row[p], &mut g);
    }
    g
}

/// Inverse of [`rsk`] for `m × n` matrices. Fails if `(S, U)` is not an image pair.
pub fn inverse_rsk(s: &MarkedTableau, u: &RecordingTableau, m: usize, n: usize) -> Result<AMatrix> {
    inverse_rsk_with(s, u, m, n, RskConvention::default())
}

pub fn inverse_rsk_with(
    s: &MarkedTableau,
    u: &RecordingTableau,
    m: usize,
    n: usize,
    conv: RskConvention,
) -> Result<AMatrix> {
    if s.shape() != u.shape() {
        return Err(Error::NotInImage("shapes differ".into()));
    }
    if !s.is_valid() || !u.rows_weakly_increasing() {
        return Err(Error::NotInImage("invalid tableau".into()));
    }
    let mut s2 = s.clone();
    let mut u2 = u.clone();
    let mut pairs = Vec::new();
    while !u2.rows.is_empty() {
        // latest cell: largest entry, rightmost, then lowest
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in u2.rows.iter().enumerate() {
            if let Some(&v) = row.last() {
                let c = row.len() - 1;
                let better = match best {
                    None => true,
                    Some((bv, br, bc)) => v > bv || (v == bv && (c > bc || (c == bc && r > br))),
                };
                if better {
                    best = Some((v, r, c));
                }
            }
        }
        let (beta, r, _) = best.unwrap();
        if s2.rows.get(r).map(|x| x.len()) != Some(u2.rows[r].len()) {
            return Err(Error::NotInImage("removal cell is not a corner".into()));
        }
        u2.rows[r].pop();
        if u2.rows[r].is_empty() {
            u2.rows.pop();
        }
        let alpha = uninsert(&mut s2, r);
        pairs.push((beta, alpha));
    }
    let mut a = AMatrix::zeros(m, n);
    let mut primes = vec![vec![0u32; n]; m];
    for &(beta, alpha) in &pairs {
        let (i, j) = (alpha.value as usize, beta as usize);
        if i == 0 || i > m || j == 0 || j > n {
            return Err(Error::NotInImage(format!("letter {alpha} or column {beta} outside {m}×{n}")));
        }
        let mut e = a.get(i - 1, j - 1);
        e.v += 1;
        a.set(i - 1, j - 1, e);
        if alpha.marked {
            primes[i - 1][j - 1] += 1;
        }
    }
    for i in 0..m {
        for j in 0..n {
            let (k, v) = (primes[i][j], a.get(i, j).v);
            let ok = match conv.marked_entries {
                MarkedEntries::SinglePrime => k <= 1,
                MarkedEntries::Repeated => k == 0 || k == v,
            };
            if !ok {
                return Err(Error::NotInImage(format!("cell ({}, {}) has {k} primed copies", i + 1, j + 1)));
            }
            a.set(i, j, Entry::new(v, k > 0));
        }
    }
    // the greedy reversal is only trusted if it reproduces the input
    if rsk_with(&a, conv) != (s.clone(), u.clone()) {
        return Err(Error::NotInImage("pair is not produced by any matrix".into()));
    }
    Ok(a)
}

/// Longest weakly increasing subsequence that uses each marked letter at most once.
///
/// Quadratic dynamic program over end positions; shares no code with insertion.
pub fn lis_marked(word: &[MarkedLetter]) -> usize {
    ending_lengths(word).into_iter().max().unwrap_or(0)
}

fn ending_lengths(word: &[MarkedLetter]) -> Vec<usize> {
    let mut best = vec![0usize; word.len()];
    for p in 0..word.len() {
        let w = word[p];
        let mut b = 0;
        for q in 0..p {
            let v = word[q];
            if v < w || (v == w && !w.marked) {
                b = b.max(best[q]);
            }
        }
        best[p] = b + 1;
    }
    best
}

/// For each prefix, the column where the last letter lands in the first row
/// equals the longest admissible subsequence ending at that letter.
pub fn column_of_new_cell_check(word: &[MarkedLetter]) -> bool {
    let want = ending_lengths(word);
    let mut row: Vec<MarkedLetter> = Vec::new();
    for (k, &x) in word.iter().enumerate() {
        let pos = if x.marked {
            row.partition_point(|g| *g < x)
        } else {
            row.partition_point(|g| *g <= x)
        };
        if pos == row.len() {
            row.push(x);
        } else {
            row[pos] = x;
        }
        if pos + 1 != want[k] {
            return false;
        }
    }
    true
}

/// Outcome of checking one convention on every matrix up to a size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub convention: RskConvention,
    pub cases: usize,
    pub insertion_tableau_valid: bool,
    pub recording_semistandard: bool,
    pub marks_conserved: bool,
    pub content_conserved: bool,
    pub round_trip: bool,
    pub injective: bool,
    pub first_failure: Option<String>,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.insertion_tableau_valid
            && self.recording_semistandard
            && self.marks_conserved
            && self.content_conserved
            && self.round_trip
            && self.injective
    }
}

/// Every matrix with `m, n ≤ max_dim` and entry magnitudes `≤ max_mag`.
pub fn all_matrices(m: usize, n: usize, max_mag: u32) -> Vec<AMatrix> {
    let choices: Vec<Entry> = std::iter::once(Entry::new(0, false))
        .chain((1..=max_mag).flat_map(|v| [Entry::new(v, false), Entry::new(v, true)]))
        .collect();
    let cells = m * n;
    let total = choices.len().pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut a = AMatrix::zeros(m, n);
            for c in 0..cells {
                a.set(c / n, c % n, choices[code % choices.len()]);
                code /= choices.len();
            }
            a
        })
        .collect()
}

/// Runs the structural checks of the correspondence for one convention.
pub fn convention_gate(conv: RskConvention, max_dim: usize, max_mag: u32) -> GateReport {
    let mut rep = GateReport {
        convention: conv,
        cases: 0,
        insertion_tableau_valid: true,
        recording_semistandard: true,
        marks_conserved: true,
        content_conserved: true,
        round_trip: true,
        injective: true,
        first_failure: None,
    };
    let mut seen = std::collections::HashMap::new();
    for m in 1..=max_dim {
        for n in 1..=max_dim {
            for a in all_matrices(m, n, max_mag) {
                rep.cases += 1;
                let (s, u) = rsk_with(&a, conv);
                let fail = |flag: &mut bool, what: &str, rep_first: &mut Option<String>| {
                    *flag = false;
                    if rep_first.is_none() {
                        *rep_first = Some(format!("{what} for {:?}", a.rows()));
                    }
                };
                if !s.is_valid() {
                    fail(&mut rep.insertion_tableau_valid, "invalid insertion tableau", &mut rep.first_failure);
                }
                if !u.is_semistandard() {
                    fail(&mut rep.recording_semistandard, "recording tableau not semistandard", &mut rep.first_failure);
                }
                if s.mark() != a.mark() {
                    fail(&mut rep.marks_conserved, "mark(S) != mark(A)", &mut rep.first_failure);
                }
                if s.content(m) != a.row_sums() || u.content(n) != a.col_sums() {
                    fail(&mut rep.content_conserved, "content mismatch", &mut rep.first_failure);
                }
                if inverse_rsk_with(&s, &u, m, n, conv).as_ref() != Ok(&a) {
                    fail(&mut rep.round_trip, "inverse does not recover A", &mut rep.first_failure);
                }
                if let Some(prev) = seen.insert((m, n, s.clone(), u.clone()), a.clone()) {
                    if prev != a {
                        fail(&mut rep.injective, "two matrices share an image", &mut rep.first_failure);
                    }
                }
            }
        }
    }
    rep
}
