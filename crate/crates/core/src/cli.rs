//! Command-line front end. [`run`] parses the arguments, executes one
//! subcommand and returns the process exit code: 0 when every check passes,
//! 1 when a check fails, 2 on a usage or input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::Rational;

use crate::basis::{dim_sk2, echelon_basis, echelon_reports, genfunc_crosscheck};
use crate::envelopes::{
    envelope_reports, i_constant_reports, inner_product_assembly, inner_product_derived,
    inner_product_printed, inner_product_reports, inner_product_upper, lfunc::default_k_samples, lfunc::LEVELS,
    lfunc_constants_suite, lfunc_residue_identity, theorem::b_of_k, theorem::b_of_k_conservative,
    theorem::coefficient_constant_reports, theorem::oracle_suite, certify_form, EnvelopeConstants, IConstants,
};
use crate::error::{Error, Result};
use crate::forms::{check_bp_envelope, dual_construction_suite, FormName};
use crate::partitions::{chain_reports, verify_thm2_trend, verify_thm3, ChainInputs, PartitionTables};
use crate::report::{BoundReport, ReportDocument};
use crate::rigor::suite::{line_bounds, suite_reports, SuiteConfig};
use crate::rigor::transform::{transformation_suite, DEFAULT_SEED};
use crate::series::parse_rational;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cuspbound", version, about = "Exact level-2 q-expansions and certified cusp form coefficient bounds")]
#[command(after_help = "Environment: THREADS (worker threads), PRECISION_BITS (ball precision, default 200).")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the q-expansion of a named form as `n,value` CSV.
    Expand {
        /// eta24, delta, psi, phi, f2, s4, delta8, j, e<k> or fkm:<k>,<m>
        #[arg(long)]
        form: String,
        /// Last exponent written.
        #[arg(long)]
        terms: i64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Echelon basis F_(k,m) of the weight-k level-2 cusp forms.
    Basis {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 40)]
        terms: i64,
        /// Directory receiving one CSV per form.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition envelopes and coefficient growth of the Hauptmoduln.
    Partitions {
        /// Doubling chain of envelopes, checked against exact tables.
        #[arg(long)]
        chain: bool,
        /// Exact envelope check for psi and phi coefficients up to N.
        #[arg(long, value_name = "N")]
        verify_thm3: Option<u64>,
        /// Ratio to the asymptotic main term at N/4, N/2, N.
        #[arg(long, value_name = "N")]
        thm2_trend: Option<u64>,
        /// Table length for the chain check.
        #[arg(long, default_value_t = 3000)]
        table_max: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Certified evaluation suites.
    Rigor {
        #[arg(long, value_enum)]
        suite: Option<SuiteName>,
        /// Transformation identities at seeded points.
        #[arg(long)]
        transform_check: bool,
        /// Grid count for the line extrema.
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Inner-product bounds and B(k).
    Bounds {
        /// Bound on <F_(k,m), F_(k,m)>.
        #[arg(long, num_args = 2, value_names = ["K", "M"])]
        inner_product: Option<Vec<u32>>,
        /// B(k), printed and conservative.
        #[arg(long, value_name = "K")]
        b_of_k: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Numeric checks behind the Petersson norm lower bound.
    Lfunc {
        #[arg(long)]
        suite: bool,
        /// Residue identity at a single x.
        #[arg(long, value_name = "X")]
        residue: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the explicit bound on G = sum a(m) F_(k,m) for n <= nmax.
    Certify {
        #[arg(long)]
        weight: u32,
        /// One coefficient a(m) per line, either `value` or `m,value`.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, default_value_t = 100)]
        nmax: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the reproduction checks for the selected parts.
    ReproducePaper {
        /// Comma-separated subset of 3,4,5,6.
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        sections: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Grid count for the line extrema.
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    PaperConstants,
}

/// Maps a library error to an exit code.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let label = command_label(&args);
    match execute(cli.command, &label) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("THREADS must be a positive integer, got `{v}`")))?;
    // A second call in the same process keeps the existing pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// The invocation with output paths removed, so the JSON does not depend on
/// where it is written.
fn command_label(args: &[std::ffi::OsString]) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        let s = a.to_string_lossy();
        if skip {
            skip = false;
            continue;
        }
        if s == "--json" || s == "--out" {
            skip = true;
            continue;
        }
        if s.starts_with("--json=") || s.starts_with("--out=") {
            continue;
        }
        out.push(s.into_owned());
    }
    out.join(" ")
}

fn execute(cmd: Command, label: &str) -> Result<i32> {
    match cmd {
        Command::Expand { form, terms, out } => cmd_expand(&form, terms, out.as_deref()),
        Command::Basis { weight, terms, out } => cmd_basis(weight, terms, out.as_deref()),
        Command::Partitions { chain, verify_thm3: thm3, thm2_trend, table_max, json } => {
            let mut reports = Vec::new();
            let nothing = !chain && thm3.is_none() && thm2_trend.is_none();
            if chain || nothing {
                reports.extend(partition_chain(table_max)?);
            }
            if let Some(n) = thm3 {
                reports.extend(verify_thm3(n)?);
            }
            if let Some(n) = thm2_trend {
                reports.extend(verify_thm2_trend(n)?.reports());
            }
            emit(label, DEFAULT_SEED, reports, json.as_deref())
        }
        Command::Rigor { suite, transform_check, grid, seed, points, tol, json } => {
            if suite.is_none() && !transform_check {
                return Err(Error::InvalidArgument("rigor needs --suite paper-constants or --transform-check".into()));
            }
            let mut reports = Vec::new();
            if suite == Some(SuiteName::PaperConstants) {
                reports.extend(line_and_envelope_reports(&suite_config(grid)?)?);
            }
            if transform_check {
                reports.extend(transformation_suite(seed, points, tol)?);
            }
            emit(label, seed, reports, json.as_deref())
        }
        Command::Bounds { inner_product, b_of_k: bk, json } => {
            if inner_product.is_none() && bk.is_none() {
                return Err(Error::InvalidArgument("bounds needs --inner-product K M or --b-of-k K".into()));
            }
            let mut reports = Vec::new();
            if let Some(km) = inner_product {
                reports.extend(inner_product_km(km[0], km[1])?);
            }
            if let Some(k) = bk {
                let printed = b_of_k(k)?;
                let conservative = b_of_k_conservative(k)?;
                println!("B({k}) = {printed:.6e} (conservative {conservative:.6e})");
                reports.push(BoundReport::upper(format!("B({k}) printed <= conservative"), printed, conservative));
            }
            emit(label, DEFAULT_SEED, reports, json.as_deref())
        }
        Command::Lfunc { suite, residue, json } => {
            if !suite && residue.is_none() {
                return Err(Error::InvalidArgument("lfunc needs --suite or --residue X".into()));
            }
            let mut reports = Vec::new();
            if let Some(x) = residue {
                reports.push(lfunc_residue_identity(x)?);
            }
            if suite {
                reports.extend(lfunc_reports()?);
            }
            emit(label, DEFAULT_SEED, reports, json.as_deref())
        }
        Command::Certify { weight, coeffs, nmax, json } => {
            let text = fs::read_to_string(&coeffs).map_err(|e| Error::Io(format!("{}: {e}", coeffs.display())))?;
            let a = parse_coefficients(&text)?;
            let report = certify_form(weight, &a, nmax, nmax as i64 + 1)?;
            emit(label, DEFAULT_SEED, vec![report], json.as_deref())
        }
        Command::ReproducePaper { sections, seed, grid, json } => {
            let reports = reproduce(&sections, seed, grid)?;
            emit(label, seed, reports, json.as_deref())
        }
    }
}

fn emit(label: &str, seed: u64, reports: Vec<BoundReport>, json: Option<&Path>) -> Result<i32> {
    for r in &reports {
        println!("{}", r.summary());
    }
    let doc = ReportDocument::new(label, seed, reports);
    if let Some(path) = json {
        fs::write(path, doc.to_json() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    let passed = doc.reports.iter().filter(|r| r.pass).count();
    println!("{}: {passed}/{} checks passed", if doc.passed() { "PASS" } else { "FAIL" }, doc.reports.len());
    Ok(if doc.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_expand(form: &str, terms: i64, out: Option<&Path>) -> Result<i32> {
    let name: FormName = form.parse()?;
    if terms < name.descriptor().valuation {
        return Err(Error::InvalidArgument(format!("--terms {terms} is below the valuation of {name}")));
    }
    let series = name.expand(terms + 1)?;
    write_output(out, &series.to_csv())?;
    Ok(EXIT_PASS)
}

fn cmd_basis(k: u32, terms: i64, out: Option<&Path>) -> Result<i32> {
    if k < 8 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("even k >= 8 required, got {k}")));
    }
    let basis = echelon_basis(k, terms.max(k as i64 / 4) + 1)?;
    basis.check_echelon()?;
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            for m in 1..=dim_sk2(k) {
                let path = dir.join(format!("F_{k}_{m}.csv"));
                fs::write(&path, basis.form(m)?.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            println!("wrote {} forms of weight {k} to {}", dim_sk2(k), dir.display());
        }
        None => {
            for m in 1..=dim_sk2(k) {
                let f = basis.form(m)?;
                let head: Vec<String> = f.terms().take(6).map(|(n, c)| format!("{c} q^{n}")).collect();
                println!("F_({k},{m}) = {} + ...", head.join(" + "));
            }
        }
    }
    Ok(EXIT_PASS)
}

/// Reads a coefficient vector: one entry per line, either `value` or
/// `m,value` with `m = 1, 2, ...`.
pub fn parse_coefficients(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value = match line.split_once(',') {
            Some((m, v)) => {
                let m: usize = m.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad index `{m}`", i + 1)))?;
                if m != out.len() + 1 {
                    return Err(Error::Parse(format!("line {}: expected index {}, got {m}", i + 1, out.len() + 1)));
                }
                v
            }
            None => line,
        };
        out.push(parse_rational(value)?);
    }
    if out.is_empty() {
        return Err(Error::Parse("empty coefficient file".into()));
    }
    Ok(out)
}

fn suite_config(grid: Option<u64>) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(m) = grid {
        if m < 100 {
            return Err(Error::InvalidArgument(format!("--grid {m} is too coarse (minimum 100)")));
        }
        cfg.grid = m;
        cfg.grid_s4 = m / 2;
    }
    Ok(cfg)
}

fn partition_chain(table_max: usize) -> Result<Vec<BoundReport>> {
    let tables = PartitionTables::build(table_max);
    let mut out = chain_reports(ChainInputs::Published, table_max as u64, &tables)?;
    out.extend(chain_reports(ChainInputs::Recomputed, table_max as u64, &tables)?);
    Ok(out)
}

fn line_and_envelope_reports(cfg: &SuiteConfig) -> Result<Vec<BoundReport>> {
    let b = line_bounds(cfg)?;
    let mut out = suite_reports(&b);
    out.extend(envelope_reports(&EnvelopeConstants::from_line_bounds(&b)?));
    Ok(out)
}

fn lfunc_reports() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for x in [2.0, 48.0, 1000.0] {
        out.push(lfunc_residue_identity(x)?);
    }
    out.extend(lfunc_constants_suite(&default_k_samples(), &LEVELS)?);
    Ok(out)
}

fn inner_product_km(k: u32, m: u32) -> Result<Vec<BoundReport>> {
    let printed = inner_product_printed(k, m)?;
    let derived = inner_product_derived(k, m)?;
    let upper = inner_product_upper(k, m)?;
    let assembly = inner_product_assembly(k, m, &IConstants::printed())?.upper_f64();
    println!("<F_({k},{m}), F_({k},{m})>: printed {printed:.6e}, derived {derived:.6e}, used {upper:.6e}");
    Ok(vec![BoundReport::upper(format!("(I_1 + I_2 + I_3)/pi <= inner-product bound at k = {k}, m = {m}"), assembly, upper)])
}

/// The checks grouped under `--sections`: 3 partitions and growth, 4 the
/// L-function constants, 5 the certified evaluations and envelopes, 6 the
/// coefficient bound itself. Sections run concurrently and their reports
/// are concatenated in ascending order.
pub fn reproduce(sections: &[u32], seed: u64, grid: Option<u64>) -> Result<Vec<BoundReport>> {
    let mut secs = sections.to_vec();
    secs.sort_unstable();
    secs.dedup();
    if secs.is_empty() {
        return Err(Error::InvalidArgument("no sections selected".into()));
    }
    if let Some(s) = secs.iter().find(|s| !(3..=6).contains(*s)) {
        return Err(Error::InvalidArgument(format!("unknown section {s}; choose from 3,4,5,6")));
    }
    let cfg = suite_config(grid)?;
    let parts: Vec<Result<Vec<BoundReport>>> = secs.par_iter().map(|&s| section(s, seed, &cfg)).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn section(s: u32, seed: u64, cfg: &SuiteConfig) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    match s {
        3 => {
            out.extend(partition_chain(3000)?);
            out.extend(verify_thm3(2000)?);
            out.extend(verify_thm2_trend(4000)?.reports());
            out.push(check_bp_envelope(300)?);
        }
        4 => out.extend(lfunc_reports()?),
        5 => {
            out.extend(line_and_envelope_reports(cfg)?);
            out.extend(i_constant_reports()?);
            out.extend(inner_product_reports(60)?);
            out.extend(transformation_suite(seed, 10, 1e-8)?);
            out.extend(dual_construction_suite(121));
        }
        6 => {
            out.extend(coefficient_constant_reports()?);
            out.extend(echelon_reports(60, 40)?);
            for k in [8, 10, 12, 16, 20] {
                out.push(genfunc_crosscheck(k, 20, 8)?);
            }
            out.extend(oracle_suite(seed, 60, 40, 200)?);
        }
        _ => unreachable!("validated above"),
    }
    Ok(out)
}
