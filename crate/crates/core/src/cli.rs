//! Command-line front end.
//!
//! Data goes to `out`, diagnostics to `err`. Exit codes: 0 when every check
//! passes, 1 when a mathematical check fails, 2 for usage and size errors.

use std::ffi::OsString;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::binom_sums::{ColumnSums, DEFAULT_SUM_CAP};
use crate::error::Error;
use crate::fpmatrix::{geometric_sum, jordan_unipotent, poly_pow_linear, superdiagonal_coeffs, FpMatrix, FpPolynomial};
use crate::holomorph::{canonical_n, ExponentBranch, HolGroup, DEFAULT_ENUMERATION_CAP};
use crate::modp::{
    binom_lucas, binom_pascal, kummer_carries, primes_up_to, PascalRows, PrimeModulus, DEFAULT_PASCAL_CAP,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

pub const MAX_PASCAL_ROWS: u64 = 512;
pub const MAX_VERIFY_PRIME: u64 = 1000;
pub const MATRIX_SUITE_CAP: u64 = 256;
pub const POLY_SUITE_CAP: u64 = 4096;

#[derive(Debug, Parser)]
#[command(name = "pascal-modp", version, about = "Pascal's triangle mod p, Jordan blocks over F_p, and exponents of Hol(F_p^m, A)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rows of Pascal's triangle reduced mod p.
    Pascal(PascalArgs),
    /// Column sums S(p^n, i) mod p and the congruence verdict.
    Sums(SumsArgs),
    /// A single binomial coefficient mod p, or its p-adic valuation.
    Binom(BinomArgs),
    /// Order and exponent of Hol(F_p^m, A).
    Holomorph(HolomorphArgs),
    /// Batch verification sweeps.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    AsciiTable,
    Csv,
    JsonLines,
}

#[derive(Debug, Args)]
pub struct PascalArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub rows: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SumsArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub power: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum BinomMethod {
    #[default]
    Lucas,
    Pascal,
}

#[derive(Debug, Args)]
pub struct BinomArgs {
    #[arg(long = "n")]
    pub n: u64,
    #[arg(long = "k")]
    pub k: u64,
    #[arg(long)]
    pub prime: u64,
    #[arg(long, value_enum, default_value_t)]
    pub method: BinomMethod,
    /// Print v_p(C(n, k)) instead of C(n, k) mod p.
    #[arg(long)]
    pub valuation: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ExponentMethod {
    #[default]
    Formula,
    Brute,
}

#[derive(Debug, Args)]
pub struct HolomorphArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t)]
    pub exponent_method: ExponentMethod,
    /// Check (α e_1)^(p^n) = e_m when m = p^n.
    #[arg(long)]
    pub witness: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Sums,
    Matrix,
    Poly,
    Holomorph,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 13)]
    pub max_prime: u64,
    /// Size bound: p^n for sums/matrix/poly, |G| for holomorph. Defaults per suite.
    #[arg(long)]
    pub max_size: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

/// One table cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(u128),
    Text(String),
    Empty,
}

impl Cell {
    fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn pass(ok: bool) -> Self {
        Cell::text(if ok { "PASS" } else { "FAIL" })
    }

    fn plain(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(x) => match u64::try_from(*x) {
                Ok(small) => Value::from(small),
                Err(_) => Value::from(x.to_string()),
            },
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x.into())
    }
}

/// Column-labelled rows rendered in any [`OutputFormat`].
#[derive(Clone, Debug)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    /// Render the ascii form as `key  value` lines (single-record output).
    vertical: bool,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), vertical: false }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
        match format {
            OutputFormat::AsciiTable if self.vertical => self.render_vertical(out),
            OutputFormat::AsciiTable => self.render_ascii(out),
            OutputFormat::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let fields: Vec<String> = row.iter().map(Cell::plain).collect();
                    writeln!(out, "{}", fields.join(","))?;
                }
                Ok(())
            }
            OutputFormat::JsonLines => {
                for row in &self.rows {
                    let record: Map<String, Value> =
                        self.columns.iter().zip(row).map(|(c, cell)| (c.to_string(), cell.json())).collect();
                    writeln!(out, "{}", Value::Object(record))?;
                }
                Ok(())
            }
        }
    }

    fn render_ascii(&self, out: &mut dyn Write) -> io::Result<()> {
        let ascii = |c: &Cell| if *c == Cell::Empty { "-".to_string() } else { c.plain() };
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(ascii(cell).len());
            }
        }
        let line = |cells: Vec<String>| -> String {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
            padded.join(" | ").trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.iter().map(|c| c.to_string()).collect()))?;
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        writeln!(out, "{}", rule.join("-+-"))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(ascii).collect()))?;
        }
        Ok(())
    }

    fn render_vertical(&self, out: &mut dyn Write) -> io::Result<()> {
        let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
        for row in &self.rows {
            for (c, cell) in self.columns.iter().zip(row) {
                let value = if *cell == Cell::Empty { "-".to_string() } else { cell.plain() };
                writeln!(out, "{c:<width$}  {value}")?;
            }
        }
        Ok(())
    }
}

/// A failure that ends a command with a given exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Internal(_)) { EXIT_CHECK_FAILED } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: format!("i/o error: {e}") }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CmdResult = Result<u8, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Pascal(args) => cmd_pascal(&args, out),
        Command::Sums(args) => cmd_sums(&args, out, err),
        Command::Binom(args) => cmd_binom(&args, out),
        Command::Holomorph(args) => cmd_holomorph(&args, out),
        Command::Verify(args) => cmd_verify(&args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn prime(p: u64) -> Result<PrimeModulus, Failure> {
    Ok(PrimeModulus::new(p)?)
}

fn cmd_pascal(args: &PascalArgs, out: &mut dyn Write) -> CmdResult {
    let p = prime(args.prime)?;
    if args.rows == 0 || args.rows > MAX_PASCAL_ROWS {
        return Err(usage(format!("--rows must be between 1 and {MAX_PASCAL_ROWS}, got {}", args.rows)));
    }
    let rows = PascalRows::new(p).take(args.rows as usize);
    if args.format == OutputFormat::AsciiTable {
        let width = (p.get() - 1).to_string().len();
        for row in rows {
            let cells: Vec<String> = row.iter().map(|r| format!("{:>width$}", r.value())).collect();
            writeln!(out, "{}", cells.join(" "))?;
        }
        return Ok(EXIT_OK);
    }
    let mut table = Table::new(vec!["n", "k", "value"]);
    for (n, row) in rows.enumerate() {
        for (k, r) in row.iter().enumerate() {
            table.push(vec![(n as u64).into(), (k as u64).into(), r.value().into()]);
        }
    }
    table.render(args.format, out)?;
    Ok(EXIT_OK)
}

fn cmd_sums(args: &SumsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let p = prime(args.prime)?;
    let sums = ColumnSums::new(p, args.power, DEFAULT_SUM_CAP)?;
    let report = sums.report();
    let mut table = Table::new(vec!["i", "residue"]);
    for (i, r) in report.residues().iter().enumerate() {
        table.push(vec![(i as u64).into(), r.value().into()]);
    }
    table.render(args.format, out)?;
    let verdict = format!("verdict: {}", if report.verdict() { "PASS" } else { "FAIL" });
    if args.format == OutputFormat::AsciiTable {
        writeln!(out, "{verdict}")?;
    } else {
        writeln!(err, "{verdict}")?;
    }
    Ok(if report.verdict() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_binom(args: &BinomArgs, out: &mut dyn Write) -> CmdResult {
    let p = prime(args.prime)?;
    let (n, k) = (args.n, args.k);
    let (method, column, value) = if args.valuation {
        if k > n {
            return Err(usage(format!("--valuation needs k <= n, got n = {n}, k = {k}")));
        }
        ("kummer", "valuation", u64::from(kummer_carries(k, n - k, p)))
    } else {
        match args.method {
            BinomMethod::Lucas => ("lucas", "value", binom_lucas(n, k, p).value()),
            BinomMethod::Pascal => {
                if n > DEFAULT_PASCAL_CAP && k <= n {
                    return Err(usage(format!(
                        "--method pascal is limited to n <= {DEFAULT_PASCAL_CAP}, got n = {n}"
                    )));
                }
                ("pascal", "value", binom_pascal(n, k, p)?.value())
            }
        }
    };
    if args.format == OutputFormat::AsciiTable {
        writeln!(out, "{value}")?;
        return Ok(EXIT_OK);
    }
    let mut table = Table::new(vec!["n", "k", "prime", "method", column]);
    table.push(vec![n.into(), k.into(), p.get().into(), Cell::text(method), value.into()]);
    table.render(args.format, out)?;
    Ok(EXIT_OK)
}

fn order_cell(p: u64, exponent: u32) -> Cell {
    match u128::from(p).checked_pow(exponent) {
        Some(order) => Cell::Int(order),
        None => Cell::text(format!("{p}^{exponent}")),
    }
}

fn cmd_holomorph(args: &HolomorphArgs, out: &mut dyn Write) -> CmdResult {
    let p = prime(args.prime)?;
    let m = args.dim;
    if m == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    let method = match args.exponent_method {
        ExponentMethod::Formula => "formula",
        ExponentMethod::Brute => "brute",
    };
    let mut table = Table::new(vec!["prime", "dim", "n", "order", "order_exponent", "exponent", "method", "branch", "witness"]);
    table.vertical = true;

    if m == 1 {
        // α is the identity, so G = V = F_p with exponent p.
        let witness = if args.witness { "n/a" } else { "skipped" };
        table.push(vec![
            p.get().into(),
            1u64.into(),
            Cell::Empty,
            p.get().into(),
            1u64.into(),
            p.get().into(),
            Cell::text(method),
            Cell::text("m=1 (degenerate: G = V)"),
            Cell::text(witness),
        ]);
        table.render(args.format, out)?;
        return Ok(EXIT_OK);
    }

    if args.exponent_method == ExponentMethod::Brute {
        let n = canonical_n(p, m)?;
        let size = u128::from(p.get()).saturating_pow(m as u32 + n);
        if size > u128::from(DEFAULT_ENUMERATION_CAP) {
            return Err(usage(format!(
                "brute-force enumeration is limited to |G| <= {DEFAULT_ENUMERATION_CAP}; p^(m+n) = {}^{} is larger",
                p.get(),
                m as u32 + n
            )));
        }
    }

    let g = HolGroup::new(p, m)?;
    let mut ok = true;
    let exponent = match args.exponent_method {
        ExponentMethod::Formula => g.exponent_formula(),
        ExponentMethod::Brute => {
            let census = g.census(DEFAULT_ENUMERATION_CAP)?;
            let alpha = g.element(1, &vec![0; m])?;
            ok &= census.exponent == g.exponent_formula();
            ok &= g.group_order() == Some(u128::from(census.elements));
            ok &= g.element_order(&alpha)? == g.alpha_order();
            census.exponent
        }
    };
    let witness = match (args.witness, g.branch()) {
        (false, _) => "skipped",
        (true, ExponentBranch::BelowPower) => "n/a",
        (true, ExponentBranch::AtPower) => {
            let passed = g.witness_check()?;
            ok &= passed;
            if passed {
                "PASS"
            } else {
                "FAIL"
            }
        }
    };
    table.push(vec![
        p.get().into(),
        (m as u64).into(),
        u64::from(g.level()).into(),
        order_cell(p.get(), g.order_exponent()),
        u64::from(g.order_exponent()).into(),
        exponent.into(),
        Cell::text(method),
        Cell::text(g.branch().label()),
        Cell::text(witness),
    ]);
    table.render(args.format, out)?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Accumulates verification lines.
struct Sweep {
    table: Table,
    failures: usize,
}

impl Sweep {
    fn new() -> Self {
        Self { table: Table::new(vec!["suite", "prime", "n", "m", "check", "result"]), failures: 0 }
    }

    fn record(&mut self, suite: &str, p: u64, n: u32, m: Option<usize>, check: &str, ok: bool) {
        if !ok {
            self.failures += 1;
        }
        let m = m.map_or(Cell::Empty, |m| (m as u64).into());
        self.table.push(vec![
            Cell::text(suite),
            p.into(),
            u64::from(n).into(),
            m,
            Cell::text(check),
            Cell::pass(ok),
        ]);
    }
}

/// `(n, p^n)` for `n = 1, 2, ...` while `p^n <= bound`.
fn prime_powers(p: u64, bound: u64) -> impl Iterator<Item = (u32, u64)> {
    (1u32..)
        .map(move |n| (n, p.checked_pow(n)))
        .take_while(move |(_, q)| matches!(q, Some(q) if *q <= bound))
        .map(|(n, q)| (n, q.expect("checked above")))
}

fn suite_cap(suite: Suite) -> (u64, u64) {
    // (default size, hard cap)
    match suite {
        Suite::Sums => (DEFAULT_SUM_CAP, DEFAULT_SUM_CAP),
        Suite::Matrix => (128, MATRIX_SUITE_CAP),
        Suite::Poly => (256, POLY_SUITE_CAP),
        Suite::Holomorph => (DEFAULT_ENUMERATION_CAP, DEFAULT_ENUMERATION_CAP),
        Suite::All => unreachable!("expanded before lookup"),
    }
}

fn sweep_sums(sweep: &mut Sweep, primes: &[PrimeModulus], bound: u64) -> Result<(), Failure> {
    for &p in primes {
        for (n, _) in prime_powers(p.get(), bound) {
            let sums = ColumnSums::new(p, n, bound)?;
            let report = sums.report();
            sweep.record("sums", p.get(), n, None, "congruence", report.verdict());
            let mut agree = true;
            for (i, r) in report.residues().iter().enumerate() {
                agree &= sums.hockey_stick(i as u64)? == *r;
            }
            sweep.record("sums", p.get(), n, None, "hockey-stick", agree);
        }
    }
    Ok(())
}

fn sweep_matrix(sweep: &mut Sweep, primes: &[PrimeModulus], bound: u64) -> Result<(), Failure> {
    for &p in primes {
        for (n, q) in prime_powers(p.get(), bound) {
            let q_usize = q as usize;
            for m in 1..q_usize {
                let a = jordan_unipotent(m, p)?;
                let sum = geometric_sum(&a, q)?;
                sweep.record("matrix", p.get(), n, Some(m), "geometric-sum-zero", sum.is_zero());
                if m == q_usize - 1 && q <= DEFAULT_SUM_CAP {
                    let coeffs = superdiagonal_coeffs(&sum)?;
                    let report = ColumnSums::new(p, n, DEFAULT_SUM_CAP)?.report();
                    sweep.record("matrix", p.get(), n, Some(m), "sum-bridge", coeffs[..] == report.residues()[..m]);
                }
            }
            let a = jordan_unipotent(q_usize, p)?;
            let delta = geometric_sum(&a, q)?;
            let corner = FpMatrix::unit(q_usize, p, 0, q_usize - 1)?;
            sweep.record("matrix", p.get(), n, Some(q_usize), "delta-is-corner-unit", delta == corner);
        }
    }
    Ok(())
}

fn sweep_poly(sweep: &mut Sweep, primes: &[PrimeModulus], bound: u64) -> Result<(), Failure> {
    for &p in primes {
        for (n, q) in prime_powers(p.get(), bound) {
            let poly = poly_pow_linear(p, q - 1);
            let ok = poly == FpPolynomial::all_ones(p, q as usize) && poly.values().len() as u64 == q;
            sweep.record("poly", p.get(), n, None, "all-ones", ok);
        }
    }
    Ok(())
}

fn sweep_holomorph(sweep: &mut Sweep, primes: &[PrimeModulus], bound: u64) -> Result<(), Failure> {
    for &p in primes {
        for m in 2usize.. {
            let n = canonical_n(p, m)?;
            let size = u128::from(p.get()).saturating_pow(m as u32 + n);
            if size > u128::from(bound) {
                break;
            }
            let g = HolGroup::new(p, m)?;
            let census = g.census(bound)?;
            let alpha = g.element(1, &vec![0; m])?;
            sweep.record("holomorph", p.get(), n, Some(m), "exponent", census.exponent == g.exponent_formula());
            sweep.record("holomorph", p.get(), n, Some(m), "group-order", u128::from(census.elements) == size);
            sweep.record("holomorph", p.get(), n, Some(m), "alpha-order", g.element_order(&alpha)? == g.alpha_order());
            if g.branch() == ExponentBranch::AtPower {
                sweep.record("holomorph", p.get(), n, Some(m), "witness", g.witness_check()?);
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if !(2..=MAX_VERIFY_PRIME).contains(&args.max_prime) {
        return Err(usage(format!("--max-prime must be between 2 and {MAX_VERIFY_PRIME}")));
    }
    let primes: Vec<PrimeModulus> =
        primes_up_to(args.max_prime).into_iter().map(|p| PrimeModulus::new(p).expect("prime")).collect();
    let suites = match args.suite {
        Suite::All => vec![Suite::Sums, Suite::Matrix, Suite::Poly, Suite::Holomorph],
        one => vec![one],
    };
    let mut plan = Vec::new();
    for suite in suites {
        let (default, cap) = suite_cap(suite);
        let bound = args.max_size.unwrap_or(default);
        if bound > cap {
            return Err(usage(format!("--max-size {bound} exceeds the {suite:?} suite cap {cap}")));
        }
        plan.push((suite, bound));
    }

    let mut sweep = Sweep::new();
    for (suite, bound) in plan {
        let start = Instant::now();
        let before = sweep.table.rows.len();
        match suite {
            Suite::Sums => sweep_sums(&mut sweep, &primes, bound)?,
            Suite::Matrix => sweep_matrix(&mut sweep, &primes, bound)?,
            Suite::Poly => sweep_poly(&mut sweep, &primes, bound)?,
            Suite::Holomorph => sweep_holomorph(&mut sweep, &primes, bound)?,
            Suite::All => unreachable!(),
        }
        writeln!(
            err,
            "{suite:?}: {} checks in {:.2?}",
            sweep.table.rows.len() - before,
            start.elapsed()
        )?;
    }
    sweep.table.render(args.format, out)?;
    writeln!(err, "{} checks, {} failed", sweep.table.rows.len(), sweep.failures)?;
    Ok(if sweep.failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
