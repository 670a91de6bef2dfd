//! `isogeny-lab` command-line front end.
//!
//! Every subcommand produces a homogeneous list of records, rendered as
//! json-lines, csv or an aligned table. Exit status: 0 when every record
//! passes, 1 when a check fails (or output cannot be written), 2 on usage
//! errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::Curve;
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::hasse::{self, CharEquationChecker, CountReport, PointSample, PrimeSummary};
use crate::isogeny::{self, XMap};
use crate::zagier::{self, Verdict, ZagierRecord};

pub const DEFAULT_SEED: u64 = 0x5eed_1509_e7a0;
pub const THREADS_ENV: &str = "ISOGENY_LAB_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "isogeny-lab", version, about = "Exhaustive checks of isogeny degrees, Frobenius traces and the Hasse bound")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json-lines")]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
}

impl CurveArgs {
    fn curve(&self) -> Result<Curve, Error> {
        Curve::new(self.p, self.a, self.b)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of points of E(F_p).
    Count(CurveArgs),
    /// Frobenius trace t = p + 1 - N.
    Trace(CurveArgs),
    /// Point count with the t^2 <= 4p verdict.
    HasseCheck(CurveArgs),
    /// Every nonsingular curve over every prime in a range.
    HasseSweep {
        #[arg(long, default_value_t = 5)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
        /// Emit one record per curve instead of per-prime summaries.
        #[arg(long)]
        per_curve: bool,
    },
    /// d(phi + psi) + d(phi - psi) = 2 d(phi) + 2 d(psi) for phi = [m] and
    /// psi = [n], or psi = [n]∘pi with --frobenius.
    Parallelogram {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        frobenius: bool,
    },
    /// x-map of [m] from the addition recursion against division polynomials.
    MultMap {
        #[command(flatten)]
        curve: CurveArgs,
        /// Defaults to every 1 <= m <= 8 with p not dividing m.
        #[arg(long)]
        m: Option<i64>,
    },
    /// phi^2 - tr(phi) phi + d(phi) = 0 on E(F_{p^2}) for phi = [m] + [n]pi.
    CharEq {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        /// Sample this many points instead of all of them.
        #[arg(long)]
        iters: Option<usize>,
    },
    /// The character sum of x^3 - 35x + 98 against p = A^2 + 7B^2.
    Zagier {
        #[arg(long, conflicts_with = "p")]
        p_max: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Stratified random checks of H(Q1, Q2, Q3) = 2H(P, Q) + 2H(R, S).
    Lemma2Fuzz {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
    /// The resultant identity equals 4a^3 + 27b^2.
    ResultantId {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
        /// Check this many random (a, b) instead of the given pair.
        #[arg(long)]
        iters: Option<usize>,
    },
}

/// A value in an output row.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Bool(bool),
    Token(String),
    Null,
    /// Rendered with exactly six decimals.
    Ratio(f64),
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Token(s) => s.clone(),
            Cell::Null => String::new(),
            Cell::Ratio(r) => format!("{r:.6}"),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Token(s) => format!("\"{s}\""),
            Cell::Null => "null".into(),
            other => other.plain(),
        }
    }
}

fn int<T: Into<i128>>(v: T) -> Cell {
    Cell::Int(v.into())
}

fn opt<T: Into<i128>>(v: Option<T>) -> Cell {
    v.map_or(Cell::Null, int)
}

/// A row type the CLI can emit.
pub trait Record {
    const HEADERS: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
    fn passed(&self) -> bool;
}

impl Record for CountReport {
    const HEADERS: &'static [&'static str] = &["p", "a", "b", "n", "t", "bound_ok", "d_one_minus_pi"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.a),
            int(self.b),
            int(self.n),
            int(self.t),
            Cell::Bool(self.bound_ok),
            int(self.d_one_minus_pi),
        ]
    }
    fn passed(&self) -> bool {
        self.bound_ok
    }
}

impl Record for PrimeSummary {
    const HEADERS: &'static [&'static str] = &["p", "curves", "singular", "failures", "max_abs_t", "ratio"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.curves),
            int(self.singular),
            int(self.failures),
            int(self.max_abs_t),
            Cell::Ratio(self.ratio),
        ]
    }
    fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl Record for ZagierRecord {
    const HEADERS: &'static [&'static str] = &["p", "class7", "s", "a", "b", "verdict"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            Cell::Token(self.class7.token().into()),
            opt(self.s),
            opt(self.a),
            opt(self.b),
            Cell::Token(self.verdict.token().into()),
        ]
    }
    fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRecord {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub n: u64,
}

impl Record for CountRecord {
    const HEADERS: &'static [&'static str] = &["p", "a", "b", "n"];
    fn cells(&self) -> Vec<Cell> {
        vec![int(self.p), int(self.a), int(self.b), int(self.n)]
    }
    fn passed(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub t: i64,
}

impl Record for TraceRecord {
    const HEADERS: &'static [&'static str] = &["p", "a", "b", "t"];
    fn cells(&self) -> Vec<Cell> {
        vec![int(self.p), int(self.a), int(self.b), int(self.t)]
    }
    fn passed(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelogramRecord {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub phi: String,
    pub psi: String,
    pub lhs: usize,
    pub rhs: usize,
    pub u_constant: bool,
    pub ok: bool,
}

impl Record for ParallelogramRecord {
    const HEADERS: &'static [&'static str] = &["p", "a", "b", "phi", "psi", "lhs", "rhs", "u_constant", "ok"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.a),
            int(self.b),
            Cell::Token(self.phi.clone()),
            Cell::Token(self.psi.clone()),
            int(self.lhs as u64),
            int(self.rhs as u64),
            Cell::Bool(self.u_constant),
            Cell::Bool(self.ok),
        ]
    }
    fn passed(&self) -> bool {
        self.ok && self.u_constant
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultMapRecord {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub m: i64,
    pub degree: usize,
    pub num_degree: usize,
    pub den_degree: usize,
    pub oracle_agree: bool,
    pub ok: bool,
}

impl Record for MultMapRecord {
    const HEADERS: &'static [&'static str] =
        &["p", "a", "b", "m", "degree", "num_degree", "den_degree", "oracle_agree", "ok"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.a),
            int(self.b),
            int(self.m),
            int(self.degree as u64),
            int(self.num_degree as u64),
            int(self.den_degree as u64),
            Cell::Bool(self.oracle_agree),
            Cell::Bool(self.ok),
        ]
    }
    fn passed(&self) -> bool {
        self.ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharEqRecord {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub t: i64,
    pub m: i64,
    pub n: i64,
    pub tr: i128,
    pub nrm: i128,
    pub points: usize,
    pub ok: bool,
}

impl Record for CharEqRecord {
    const HEADERS: &'static [&'static str] = &["p", "a", "b", "t", "m", "n", "tr", "nrm", "points", "ok"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.a),
            int(self.b),
            int(self.t),
            int(self.m),
            int(self.n),
            Cell::Int(self.tr),
            Cell::Int(self.nrm),
            int(self.points as u64),
            Cell::Bool(self.ok),
        ]
    }
    fn passed(&self) -> bool {
        self.ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Record {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub seed: u64,
    pub iters: usize,
    pub max_deg: usize,
    pub failures: usize,
    pub gcd_failures: usize,
    pub ok: bool,
}

impl Record for Lemma2Record {
    const HEADERS: &'static [&'static str] =
        &["p", "a", "b", "seed", "iters", "max_deg", "failures", "gcd_failures", "ok"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.a),
            int(self.b),
            int(self.seed),
            int(self.iters as u64),
            int(self.max_deg as u64),
            int(self.failures as u64),
            int(self.gcd_failures as u64),
            Cell::Bool(self.ok),
        ]
    }
    fn passed(&self) -> bool {
        self.ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantRecord {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub value: u64,
    pub expected: u64,
    pub ok: bool,
}

impl Record for ResultantRecord {
    const HEADERS: &'static [&'static str] = &["p", "a", "b", "value", "expected", "ok"];
    fn cells(&self) -> Vec<Cell> {
        vec![
            int(self.p),
            int(self.a),
            int(self.b),
            int(self.value),
            int(self.expected),
            Cell::Bool(self.ok),
        ]
    }
    fn passed(&self) -> bool {
        self.ok
    }
}

/// Rows ready for emission, with their pass/fail status.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub headers: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub all_passed: bool,
}

impl Output {
    pub fn from_records<R: Record>(records: &[R]) -> Output {
        Output {
            headers: R::HEADERS,
            rows: records.iter().map(Record::cells).collect(),
            all_passed: records.iter().all(Record::passed),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }
}

/// Writes the rows in the requested format.
pub fn emit<W: Write>(output: &Output, format: Format, sink: &mut W) -> io::Result<()> {
    match format {
        Format::JsonLines => {
            for row in &output.rows {
                let fields: Vec<String> = output
                    .headers
                    .iter()
                    .zip(row)
                    .map(|(k, v)| format!("\"{k}\":{}", v.json()))
                    .collect();
                writeln!(sink, "{{{}}}", fields.join(","))?;
            }
        }
        Format::Csv => {
            writeln!(sink, "{}", output.headers.join(","))?;
            for row in &output.rows {
                let fields: Vec<String> = row.iter().map(Cell::plain).collect();
                writeln!(sink, "{}", fields.join(","))?;
            }
        }
        Format::Human => {
            let rendered: Vec<Vec<String>> = output
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| match c {
                            Cell::Null => "-".to_string(),
                            c => c.plain(),
                        })
                        .collect()
                })
                .collect();
            let mut widths: Vec<usize> = output.headers.iter().map(|h| h.len()).collect();
            for row in &rendered {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(sink, "{}", line(output.headers.to_vec()))?;
            for row in &rendered {
                writeln!(sink, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(())
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn map_label(m: i64, frobenius: bool) -> String {
    match (m, frobenius) {
        (1, true) => "pi".into(),
        (m, true) => format!("[{m}]pi"),
        (m, false) => format!("[{m}]"),
    }
}

fn endo_xmap(curve: &Curve, m: i64, frobenius: bool) -> Result<XMap, Error> {
    let base = isogeny::mult_by_m_xmap(curve, m)?;
    if frobenius {
        base.compose(&XMap::frobenius(*curve))
    } else {
        Ok(base)
    }
}

/// Runs one subcommand and collects its records.
pub fn run(cli: &Cli) -> Result<Output, Error> {
    Ok(match &cli.command {
        Command::Count(args) => {
            let c = args.curve()?;
            Output::from_records(&[CountRecord {
                p: c.p(),
                a: c.a(),
                b: c.b(),
                n: hasse::count_points(&c)?,
            }])
        }
        Command::Trace(args) => {
            let c = args.curve()?;
            Output::from_records(&[TraceRecord {
                p: c.p(),
                a: c.a(),
                b: c.b(),
                t: hasse::trace(&c)?,
            }])
        }
        Command::HasseCheck(args) => Output::from_records(&[hasse::hasse_check(&args.curve()?)?]),
        Command::HasseSweep {
            p_min,
            p_max,
            per_curve,
        } => {
            let reports = hasse::exhaustive_sweep(*p_min, *p_max)?;
            if *per_curve {
                Output::from_records(&reports)
            } else {
                Output::from_records(&hasse::summarize(&reports))
            }
        }
        Command::Parallelogram {
            curve,
            m,
            n,
            frobenius,
        } => {
            let c = curve.curve()?;
            let n = match (n, frobenius) {
                (Some(n), _) => *n,
                (None, true) => 1,
                (None, false) => return Err(usage("parallelogram needs --n or --frobenius")),
            };
            let phi = isogeny::mult_by_m_xmap(&c, *m)?;
            let psi = endo_xmap(&c, n, *frobenius)?;
            let report = isogeny::parallelogram_check(&phi, &psi)?;
            let triple = isogeny::compose_sum_product(&phi, &psi)?;
            let u_constant = match isogeny::verify_u_constant(&triple) {
                Ok(_) => true,
                Err(e) if e.is_violation() => false,
                Err(e) => return Err(e),
            };
            Output::from_records(&[ParallelogramRecord {
                p: c.p(),
                a: c.a(),
                b: c.b(),
                phi: map_label(*m, false),
                psi: map_label(n, *frobenius),
                lhs: report.lhs,
                rhs: report.rhs,
                u_constant,
                ok: report.ok,
            }])
        }
        Command::MultMap { curve, m } => {
            let c = curve.curve()?;
            let ms: Vec<i64> = match m {
                Some(m) => vec![*m],
                None => (1..=8).filter(|&m| !(m as u64).is_multiple_of(c.p())).collect(),
            };
            let mut records = Vec::with_capacity(ms.len());
            for m in ms {
                let rec = isogeny::mult_by_m_xmap(&c, m)?;
                let oracle = isogeny::division_poly_xmap(&c, m)?;
                let degree = rec.degree();
                let oracle_agree = rec == oracle;
                records.push(MultMapRecord {
                    p: c.p(),
                    a: c.a(),
                    b: c.b(),
                    m,
                    degree,
                    num_degree: rec.num().degree().finite().unwrap_or(0),
                    den_degree: rec.den().degree().finite().unwrap_or(0),
                    oracle_agree,
                    ok: oracle_agree && degree as i64 == m * m,
                });
            }
            Output::from_records(&records)
        }
        Command::CharEq { curve, m, n, iters } => {
            let c = curve.curve()?;
            let checker = CharEquationChecker::new(&c)?;
            let sample = match iters {
                Some(count) => PointSample::Random {
                    count: *count,
                    seed: cli.seed,
                },
                None => PointSample::All,
            };
            let form = checker.form();
            let ok = checker.check(*m, *n, sample)?;
            Output::from_records(&[CharEqRecord {
                p: c.p(),
                a: c.a(),
                b: c.b(),
                t: form.t,
                m: *m,
                n: *n,
                tr: form.endo_trace(*m, *n),
                nrm: form.eval(*m, *n),
                points: iters.map_or(checker.points().len(), |k| k.min(checker.points().len())),
                ok,
            }])
        }
        Command::Zagier { p_max, p } => {
            let records = match (p_max, p) {
                (Some(p_max), None) => zagier::zagier_sweep(*p_max)?,
                (None, Some(p)) => vec![zagier::zagier_verify(*p)?],
                _ => return Err(usage("zagier needs exactly one of --p-max or --p")),
            };
            Output::from_records(&records)
        }
        Command::Lemma2Fuzz {
            curve,
            iters,
            max_deg,
        } => {
            let c = curve.curve()?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let s = isogeny::lemma2_fuzz(&mut rng, &c, *iters, *max_deg)?;
            Output::from_records(&[Lemma2Record {
                p: c.p(),
                a: c.a(),
                b: c.b(),
                seed: cli.seed,
                iters: s.iters,
                max_deg: *max_deg,
                failures: s.failures,
                gcd_failures: s.gcd_failures,
                ok: s.failures == 0 && s.gcd_failures == 0,
            }])
        }
        Command::ResultantId { p, a, b, iters } => {
            let modulus = PrimeModulus::new(*p)?;
            let pairs: Vec<(u64, u64)> = match (a, b, iters) {
                (Some(a), Some(b), None) => vec![(modulus.reduce(*a), modulus.reduce(*b))],
                (None, None, Some(k)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..*k)
                        .map(|_| (rng.gen_range(0..*p), rng.gen_range(0..*p)))
                        .collect()
                }
                _ => return Err(usage("resultant-id needs --a and --b, or --iters")),
            };
            let mut records = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                let value = isogeny::resultant_identity(modulus, a, b)?.re();
                let expected = crate::curve::discriminant_quantity(modulus, a, b);
                records.push(ResultantRecord {
                    p: *p,
                    a,
                    b,
                    value,
                    expected,
                    ok: value == expected,
                });
            }
            Output::from_records(&records)
        }
    })
}

fn write_output(cli: &Cli, output: &Output) -> io::Result<()> {
    let mut buf = Vec::new();
    emit(output, cli.format, &mut buf)?;
    match &cli.out {
        Some(path) => File::create(path)?.write_all(&buf),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&buf)?;
            lock.flush()
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn dispatch(cli: &Cli) -> i32 {
    let output = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("isogeny-lab: {e}");
            return if e.is_violation() { EXIT_FAIL } else { EXIT_USAGE };
        }
    };
    if let Err(e) = write_output(cli, &output) {
        eprintln!("isogeny-lab: cannot write output: {e}");
        return EXIT_FAIL;
    }
    output.exit_code()
}

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
    }
}

/// Parses arguments, honours `ISOGENY_LAB_THREADS`, and dispatches.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = match thread_cap() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("isogeny-lab: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => {
            eprintln!("isogeny-lab: cannot start worker pool: {e}");
            EXIT_FAIL
        }
    }
}
