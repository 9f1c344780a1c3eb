//! `tschur`: identity checks, marked RSK, samplers, kernels, gap tables and edge asymptotics.
//!
//! Exit codes: 0 when every check passes, 1 when a verification or statistical gate
//! fails, 2 on usage or parameter errors.

use std::fs::File;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tschur_core::edge::{bessel_to_airy_check, rect_edge_check, saddle_constants, tw2_cdf, EdgeGridReport};
use tschur_core::identities::{
    verify_dual_cauchy, verify_gessel_length, verify_gessel_row, verify_measure_normalization, verify_t_cauchy,
    IdentityReport,
};
use tschur_core::kernel::{gap_probability_auto, kernel_window, symbol, Symbol, SymbolParams};
use tschur_core::measure::{pushforward_check, tz_pushforward_check, PushforwardReport, TSchurParams, TZParams};
use tschur_core::montecarlo::{
    edge_histogram, plancherel_shape_histogram, shape_law_test, t_ascent_length, EdgeModel, ExperimentSummary,
    MarkedPermutation,
};
use tschur_core::rsk::{
    biword_with, inverse_rsk_with, lis_marked, rsk_with, AMatrix, MarkedEntries, MarkedTableau, RecordingTableau,
    RskConvention, TieOrder,
};
use tschur_core::scalar::{parse_rational, ratio_to_f64, Rational};

#[derive(Parser, Serialize)]
#[command(name = "tschur", version, about = "t-Schur measures: identities, marked RSK, kernels, edge limits")]
struct Cli {
    /// Worker threads (default: 1 for deterministic suites, all cores for Monte Carlo).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Output format (each subcommand has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
enum Command {
    /// Exact identity checks, one JSON report per line.
    Verify(VerifyArgs),
    /// Marked RSK of a matrix, or the inverse of a tableau pair.
    Rsk(RskArgs),
    /// Sample shapes and compare with the exact law.
    Sample(SampleArgs),
    /// Correlation kernel window with error bounds.
    Kernel(KernelArgs),
    /// Gap probabilities ℙ(λ₁ ≤ h).
    Gap(GapArgs),
    /// Saddle constants, Tracy–Widom values and edge scaling checks.
    Edge(EdgeArgs),
    /// t-ascent lengths of marked permutations.
    Ascent(AscentArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Cauchy,
    DualCauchy,
    GesselLength,
    GesselRow,
    Normalization,
    All,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Variables x, as rationals `p/q` (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<String>,
    /// Variables y.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    y: Vec<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    t: String,
    /// Grade cap D.
    #[arg(long, default_value_t = 8)]
    deg: usize,
    /// Largest length bound k for the length symbol.
    #[arg(long, default_value_t = 4)]
    max_length: usize,
    /// Largest row bound h for the row symbol.
    #[arg(long, default_value_t = 3)]
    max_row: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConventionArg {
    SinglePrime,
    Repeated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TiesArg {
    Increasing,
    MarkedDescending,
}

#[derive(Args, Serialize)]
struct RskArgs {
    /// Matrix as JSON rows of `{"v": int, "p": bool}`; read from stdin when absent.
    #[arg(long)]
    matrix: Option<String>,
    /// Read `{"S": ..., "U": ...}` and print the matrix.
    #[arg(long)]
    inverse: bool,
    /// Tableau pair for `--inverse`; read from stdin when absent.
    #[arg(long)]
    tableaux: Option<String>,
    /// Matrix height for `--inverse` (default: largest letter of S).
    #[arg(long)]
    rows: Option<usize>,
    /// Matrix width for `--inverse` (default: largest entry of U).
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, value_enum, default_value = "single-prime")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "increasing")]
    ties: TiesArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SampleModel {
    Matrix,
    Plancherel,
    Tz,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: SampleModel,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Vec<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    t: String,
    /// Fixed permutation size (plancherel model).
    #[arg(long)]
    n: Option<usize>,
    /// Poisson mean (plancherel model).
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    zp: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Compare shapes with |λ| ≤ deg.
    #[arg(long, default_value_t = 8)]
    deg: usize,
}

#[derive(Args, Serialize, Clone)]
struct SymbolArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Vec<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    t: String,
    /// Exponential parameters: symbol factor exp((1−t)·a·z − b/z).
    #[arg(long, default_value = "0")]
    a: String,
    #[arg(long, default_value = "0")]
    b: String,
    /// Laurent window half-width.
    #[arg(long, default_value_t = 80)]
    window: usize,
}

#[derive(Args, Serialize)]
struct KernelArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
    lo: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 4)]
    hi: i64,
}

#[derive(Args, Serialize)]
struct GapArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    h_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 10)]
    h_max: i64,
    /// Target diagonal tail for the truncation.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 400)]
    max_size: usize,
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false, id = "edge_mode")]
struct EdgeModes {
    /// α τ t
    #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["ALPHA", "TAU", "T"])]
    saddle: Option<Vec<f64>>,
    /// Arguments s of F₂(s).
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    tw2: Option<Vec<f64>>,
    /// Values of κ.
    #[arg(long, num_args = 1..)]
    bessel_airy: Option<Vec<f64>>,
    /// n… α τ t
    #[arg(long, num_args = 4.., allow_negative_numbers = true)]
    rect: Option<Vec<f64>>,
}

#[derive(Args, Serialize)]
struct EdgeArgs {
    #[command(flatten)]
    mode: EdgeModes,
    /// Quadrature order for F₂.
    #[arg(long, default_value_t = 40)]
    q: usize,
    /// t for the Bessel kernel.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    t: f64,
    /// Scaled grid values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-2.0, -1.0, 0.0, 1.0, 2.0])]
    grid: Vec<f64>,
    /// Grid for the 2×2 minor check in `--rect`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.0, 0.0, 1.0])]
    minor_grid: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AscentModel {
    Poisson,
    Fixed,
}

#[derive(Args, Serialize)]
struct AscentArgs {
    /// A single permutation (comma separated); prints its t-ascent length.
    #[arg(long, value_delimiter = ',')]
    perm: Vec<u32>,
    /// Marks for `--perm`, 0 or 1 per position (default: all 0).
    #[arg(long, value_delimiter = ',')]
    marks: Vec<u8>,
    #[arg(long, value_enum, default_value = "poisson")]
    model: AscentModel,
    #[arg(long, default_value_t = 400.0)]
    kappa: f64,
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    t: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<tschur_core::error::Error> for Failure {
    fn from(e: tschur_core::error::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("bad JSON: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

type Run = Result<bool, Failure>;

/// Output sink: one header echoing the configuration, then records.
struct Sink {
    format: Format,
    out: Box<dyn Write>,
}

impl Sink {
    fn new(cli: &Cli, default: Format) -> Result<Self, Failure> {
        let format = cli.format.unwrap_or(default);
        let out: Box<dyn Write> = match &cli.output {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout())),
        };
        let mut s = Sink { format, out };
        let config = serde_json::to_string(&json!({ "config": cli }))?;
        match format {
            Format::Json => writeln!(s.out, "{config}")?,
            Format::Csv => writeln!(s.out, "# {config}")?,
        }
        Ok(s)
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<(), Failure> {
        writeln!(self.out, "{}", serde_json::to_string(v)?)?;
        Ok(())
    }

    fn csv<R: AsRef<[u8]>>(&mut self, header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(&mut self.out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn rationals(v: &[String]) -> Result<Vec<Rational>, Failure> {
    v.iter().map(|s| parse_rational(s).map_err(Failure::from)).collect()
}

fn float(s: &str) -> Result<f64, Failure> {
    Ok(ratio_to_f64(&parse_rational(s)?))
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s)?;
    Ok(s)
}

fn run_verify(cli: &Cli, a: &VerifyArgs) -> Run {
    let (x, y, t) = (rationals(&a.x)?, rationals(&a.y)?, parse_rational(&a.t)?);
    let mut reports: Vec<IdentityReport> = Vec::new();
    let want = |s: Suite| a.suite == s || a.suite == Suite::All;
    if want(Suite::Cauchy) {
        reports.push(verify_t_cauchy(&x, &y, &t, a.deg)?);
    }
    if want(Suite::DualCauchy) {
        reports.push(verify_dual_cauchy(&x, &y, &t, a.deg)?);
    }
    if want(Suite::GesselLength) {
        for k in 1..=a.max_length {
            reports.push(verify_gessel_length(&x, &y, &t, k, a.deg)?);
        }
    }
    if want(Suite::GesselRow) {
        for h in 1..=a.max_row {
            reports.push(verify_gessel_row(&x, &y, &t, h, a.deg)?);
        }
    }
    if a.suite == Suite::Normalization {
        reports.push(verify_measure_normalization(&x, &y, &t, a.deg)?);
    }
    let mut sink = Sink::new(cli, Format::Json)?;
    match sink.format {
        Format::Json => {
            for r in &reports {
                sink.json(r)?;
            }
        }
        Format::Csv => sink.csv(
            &["identity", "truncation", "status", "grades_compared", "first_mismatch_grade", "detail"],
            reports.iter().map(|r| {
                vec![
                    r.identity.clone(),
                    r.truncation.map(|v| v.to_string()).unwrap_or_default(),
                    serde_json::to_value(r.status).map(|v| v.as_str().unwrap_or("").to_string()).unwrap_or_default(),
                    r.grades_compared.to_string(),
                    r.first_mismatch.as_ref().map(|m| m.grade.to_string()).unwrap_or_default(),
                    r.detail.clone().unwrap_or_default(),
                ]
            }),
        )?,
    }
    Ok(reports.iter().all(IdentityReport::passed))
}

fn convention(a: &RskArgs) -> RskConvention {
    RskConvention {
        marked_entries: match a.convention {
            ConventionArg::SinglePrime => MarkedEntries::SinglePrime,
            ConventionArg::Repeated => MarkedEntries::Repeated,
        },
        ties: match a.ties {
            TiesArg::Increasing => TieOrder::Increasing,
            TiesArg::MarkedDescending => TieOrder::MarkedDescending,
        },
    }
}

#[derive(serde::Deserialize)]
struct TableauPair {
    #[serde(rename = "S")]
    s: MarkedTableau,
    #[serde(rename = "U")]
    u: RecordingTableau,
}

fn run_rsk(cli: &Cli, a: &RskArgs) -> Run {
    let conv = convention(a);
    let mut sink = Sink::new(cli, Format::Json)?;
    if a.inverse {
        let text = match &a.tableaux {
            Some(s) => s.clone(),
            None => read_stdin()?,
        };
        let pair: TableauPair = serde_json::from_str(&text)?;
        let m = a.rows.unwrap_or_else(|| pair.s.rows().iter().flatten().map(|l| l.value as usize).max().unwrap_or(0));
        let n = a.cols.unwrap_or_else(|| pair.u.rows().iter().flatten().map(|&v| v as usize).max().unwrap_or(0));
        let mat = inverse_rsk_with(&pair.s, &pair.u, m, n, conv)?;
        sink.json(&json!({ "A": mat }))?;
        return Ok(true);
    }
    let text = match &a.matrix {
        Some(s) => s.clone(),
        None => read_stdin()?,
    };
    let mat: AMatrix = serde_json::from_str(&text)?;
    let (s, u) = rsk_with(&mat, conv);
    let word = biword_with(&mat, conv).word();
    let shape = s.shape();
    let report = json!({
        "S": s,
        "U": u,
        "shape": shape,
        "lis": lis_marked(&word),
        "mark": s.mark(),
    });
    match sink.format {
        Format::Json => sink.json(&report)?,
        Format::Csv => sink.csv(
            &["shape", "lis", "mark", "S", "U"],
            [vec![
                serde_json::to_string(&shape)?,
                lis_marked(&word).to_string(),
                s.mark().to_string(),
                serde_json::to_string(&s)?,
                serde_json::to_string(&u)?,
            ]],
        )?,
    }
    Ok(true)
}

fn pushforward_out(sink: &mut Sink, r: &PushforwardReport) -> Result<(), Failure> {
    match sink.format {
        Format::Json => sink.json(r),
        Format::Csv => sink.csv(
            &["shape", "count", "exact_prob", "z_score"],
            r.rows.iter().map(|row| {
                vec![
                    serde_json::to_string(&row.shape).unwrap_or_default(),
                    row.count.to_string(),
                    format!("{:e}", row.prob),
                    format!("{:.4}", row.z_score),
                ]
            }),
        ),
    }
}

fn summaries_out(sink: &mut Sink, rs: &[ExperimentSummary]) -> Result<(), Failure> {
    match sink.format {
        Format::Json => {
            for r in rs {
                sink.json(r)?;
            }
            Ok(())
        }
        Format::Csv => sink.csv(
            &["experiment", "shape", "count", "exact_prob"],
            rs.iter().flat_map(|r| {
                r.rows.iter().map(move |row| {
                    vec![r.experiment.clone(), row.label.clone(), row.count.to_string(), format!("{:e}", row.reference)]
                })
            }),
        ),
    }
}

fn run_sample(cli: &Cli, a: &SampleArgs) -> Run {
    let t = parse_rational(&a.t)?;
    match a.model {
        SampleModel::Matrix => {
            let (x, y) = (rationals(&a.x)?, rationals(&a.y)?);
            let (m, n) = (x.len(), y.len());
            let p = TSchurParams::new(x, y, t)?;
            let r = pushforward_check(m, n, &p, a.trials, a.deg, a.seed)?;
            let mut sink = Sink::new(cli, Format::Csv)?;
            pushforward_out(&mut sink, &r)?;
            Ok(r.passed)
        }
        SampleModel::Tz => {
            let need = |v: &Option<String>, name: &str| match v {
                Some(s) => float(s),
                None => Err(Failure::Usage(format!("--{name} is required"))),
            };
            let p = TZParams::new(need(&a.z, "z")?, need(&a.zp, "zp")?, need(&a.xi, "xi")?, ratio_to_f64(&t))?;
            let r = tz_pushforward_check(&p, a.trials, a.deg, a.seed)?;
            let mut sink = Sink::new(cli, Format::Csv)?;
            pushforward_out(&mut sink, &r)?;
            Ok(r.passed)
        }
        SampleModel::Plancherel => {
            let tf = ratio_to_f64(&t);
            let rs = match (a.n, a.kappa) {
                (Some(n), None) => shape_law_test(n, &[tf], a.trials, a.seed)?,
                (None, Some(k)) => vec![plancherel_shape_histogram(k, tf, a.trials, a.deg, a.seed)?],
                _ => return Err(Failure::Usage("give exactly one of --n and --kappa".into())),
            };
            let mut sink = Sink::new(cli, Format::Csv)?;
            summaries_out(&mut sink, &rs)?;
            Ok(rs.iter().all(|r| r.passed))
        }
    }
}

fn build_symbol(a: &SymbolArgs) -> Result<Symbol, Failure> {
    let xs = rationals(&a.x)?.iter().map(ratio_to_f64).collect();
    let ys = rationals(&a.y)?.iter().map(ratio_to_f64).collect();
    let params = SymbolParams { x: xs, y: ys, t: float(&a.t)?, a: float(&a.a)?, b: float(&a.b)? };
    Ok(symbol(&params, a.window)?)
}

fn run_kernel(cli: &Cli, a: &KernelArgs) -> Run {
    let sym = build_symbol(&a.symbol)?;
    let kw = kernel_window(&sym, a.lo, a.hi)?;
    let mut sink = Sink::new(cli, Format::Csv)?;
    match sink.format {
        Format::Json => sink.json(&kw)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, row) in kw.values.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    let (d, e) = (kw.lo + i as i64, kw.lo + k as i64);
                    rows.push(vec![
                        d.to_string(),
                        e.to_string(),
                        format!("{}", d as f64 + 0.5),
                        format!("{}", e as f64 + 0.5),
                        format!("{v:e}"),
                        format!("{:e}", kw.errors[i][k]),
                    ]);
                }
            }
            sink.csv(&["d", "e", "point_d", "point_e", "value", "error"], rows)?
        }
    }
    Ok(true)
}

fn run_gap(cli: &Cli, a: &GapArgs) -> Run {
    let sym = build_symbol(&a.symbol)?;
    let mut rows = Vec::new();
    for h in a.h_min..=a.h_max {
        rows.push(gap_probability_auto(&sym, h, a.tol, a.max_size)?);
    }
    let mut sink = Sink::new(cli, Format::Csv)?;
    match sink.format {
        Format::Json => {
            for r in &rows {
                sink.json(r)?;
            }
        }
        Format::Csv => sink.csv(
            &["h", "value", "error", "truncation"],
            rows.iter().map(|r| {
                vec![r.h.to_string(), format!("{:.15e}", r.value), format!("{:e}", r.error()), r.truncation.to_string()]
            }),
        )?,
    }
    Ok(true)
}

fn grid_rows(reports: &[EdgeGridReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.scaling.clone(),
                r.scale.to_string(),
                format!("{:e}", r.max_deviation),
                format!("{:e}", r.mixed_plus_minus),
                format!("{:e}", r.mixed_minus_plus),
                format!("{:e}", r.airy_mixed_reference),
                format!("{:e}", r.lattice_shift),
                r.minor_deviation.map(|v| format!("{v:e}")).unwrap_or_default(),
            ]
        })
        .collect()
}

fn decreasing(reports: &[EdgeGridReport]) -> bool {
    reports.iter().all(|r| r.max_deviation.is_finite())
        && reports.windows(2).all(|w| w[1].max_deviation < w[0].max_deviation)
}

fn run_edge(cli: &Cli, a: &EdgeArgs) -> Run {
    let mut sink = Sink::new(cli, Format::Csv)?;
    if let Some(v) = &a.mode.saddle {
        let s = saddle_constants(v[0], v[1], v[2])?;
        match sink.format {
            Format::Json => sink.json(&s)?,
            Format::Csv => sink.csv(
                &["alpha", "tau", "t", "z0", "c1", "c1_alt", "c2", "phi1_residual", "phi2_residual"],
                [[s.alpha, s.tau, s.t, s.z0, s.c1, s.c1_alt, s.c2, s.phi1_residual, s.phi2_residual]
                    .iter()
                    .map(|v| format!("{v:.17e}"))
                    .collect::<Vec<_>>()],
            )?,
        }
        return Ok(s.phi1_residual < 1e-12 && s.phi2_residual < 1e-12);
    }
    if let Some(ss) = &a.mode.tw2 {
        let mut rows = Vec::new();
        for &s in ss {
            let (f, g) = (tw2_cdf(s, a.q)?, tw2_cdf(s, 2 * a.q)?);
            rows.push((s, f, g));
        }
        match sink.format {
            Format::Json => {
                for (s, f, g) in &rows {
                    sink.json(&json!({ "s": s, "cdf": f, "cdf_double_order": g }))?;
                }
            }
            Format::Csv => sink.csv(
                &["s", "cdf", "cdf_double_order", "doubling_change"],
                rows.iter().map(|(s, f, g)| {
                    vec![s.to_string(), format!("{f:.15e}"), format!("{g:.15e}"), format!("{:e}", (f - g).abs())]
                }),
            )?,
        }
        return Ok(rows.iter().all(|(_, f, g)| (f - g).abs() < 1e-8));
    }
    let reports = if let Some(ks) = &a.mode.bessel_airy {
        bessel_to_airy_check(ks, a.t, &a.grid)?
    } else if let Some(v) = &a.mode.rect {
        let k = v.len() - 3;
        let ns: Vec<usize> = v[..k].iter().map(|&n| n as usize).collect();
        rect_edge_check(&ns, v[k], v[k + 1], v[k + 2], &a.grid, &a.minor_grid)?
    } else {
        return Err(Failure::Usage("choose one of --saddle, --tw2, --bessel-airy, --rect".into()));
    };
    match sink.format {
        Format::Json => {
            for r in &reports {
                sink.json(r)?;
            }
        }
        Format::Csv => sink.csv(
            &[
                "scaling",
                "scale",
                "max_deviation",
                "mixed_plus_minus",
                "mixed_minus_plus",
                "airy_mixed_reference",
                "lattice_shift",
                "minor_deviation",
            ],
            grid_rows(&reports),
        )?,
    }
    Ok(decreasing(&reports))
}

fn run_ascent(cli: &Cli, a: &AscentArgs) -> Run {
    let mut sink = Sink::new(cli, Format::Csv)?;
    if !a.perm.is_empty() {
        let marks = if a.marks.is_empty() { vec![false; a.perm.len()] } else { a.marks.iter().map(|&m| m != 0).collect() };
        let mp = MarkedPermutation::new(a.perm.clone(), marks)?;
        let l = t_ascent_length(&mp)?;
        match sink.format {
            Format::Json => sink.json(&json!({ "length": l }))?,
            Format::Csv => sink.csv(&["length"], [vec![l.to_string()]])?,
        }
        return Ok(true);
    }
    let model = match a.model {
        AscentModel::Poisson => EdgeModel::PlancherelPoisson { kappa: a.kappa, t: a.t },
        AscentModel::Fixed => EdgeModel::FixedN { n: a.n, t: a.t },
    };
    let h = edge_histogram(model, a.trials, a.seed)?;
    match sink.format {
        Format::Json => sink.json(&h)?,
        Format::Csv => {
            let mut cum = 0u64;
            let rows: Vec<Vec<String>> = h
                .bins
                .iter()
                .map(|b| {
                    cum += b.count;
                    vec![
                        b.length.to_string(),
                        format!("{:.6}", b.rescaled),
                        b.count.to_string(),
                        format!("{:.6}", cum as f64 / h.trials as f64),
                        format!("{:.6e}", b.reference_cdf),
                        format!("{:.6e}", b.reference_mass),
                    ]
                })
                .collect();
            sink.csv(&["length", "rescaled", "count", "empirical_cdf", "reference_cdf", "reference_mass"], rows)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let monte_carlo = matches!(cli.command, Command::Sample(_) | Command::Ascent(_));
    let threads = cli.threads.or(if monte_carlo { None } else { Some(1) });
    if let Some(k) = threads {
        if rayon::ThreadPoolBuilder::new().num_threads(k).build_global().is_err() {
            eprintln!("could not configure {k} threads");
            return ExitCode::from(2);
        }
    }
    cli.threads = Some(rayon::current_num_threads());
    let result = match &cli.command {
        Command::Verify(a) => run_verify(&cli, a),
        Command::Rsk(a) => run_rsk(&cli, a),
        Command::Sample(a) => run_sample(&cli, a),
        Command::Kernel(a) => run_kernel(&cli, a),
        Command::Gap(a) => run_gap(&cli, a),
        Command::Edge(a) => run_edge(&cli, a),
        Command::Ascent(a) => run_ascent(&cli, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
