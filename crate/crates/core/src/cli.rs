//! Command-line front end.
//!
//! ```text
//! explicit-formula field  --d -4 [--bound 50]
//! explicit-formula local  --d -4 (--prime 3 | --place complex) --fn bump:center=9,radius=0.1 [--route all]
//! explicit-formula zeros  compute|import|export|certify ...
//! explicit-formula verify --d -4 --fn bump:center=2,radius=0.7 [--height 120] [--tol 1e-4] [--config run.toml]
//! ```
//!
//! Exit codes: 0 success or pass, 1 numerical failure, 2 usage error,
//! 3 unsupported field.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::explicit::{self, DEFAULT_HEIGHT, DEFAULT_TOL};
use crate::localterms::{self, LocalTerm, Route};
use crate::numeric::fmt_sig;
use crate::quadfield::{primes_up_to, ramified_places, splitting_type, FieldSpec, PlaceInfo};
use crate::testfn::TestFunction;
use crate::zeros::{self, LFunctionId, LKind, ZeroStore, CACHE_ENV};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

/// Cache directory used when neither a flag, the config file nor the
/// environment names one.
pub const DEFAULT_CACHE_DIR: &str = ".explicit-formula-cache";

const DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "explicit-formula", version, about = "Local terms and the explicit formula for imaginary quadratic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ramification and splitting of small primes.
    Field(FieldArgs),
    /// One local term by one or more routes.
    Local(LocalArgs),
    /// Compute, import, export or certify zero lists.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Compare both sides of the explicit formula.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Squarefree d < 0 or fundamental discriminant D < 0.
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, default_value_t = 50)]
    pub bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Closed,
    Contour,
    Fd,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlaceArg {
    Complex,
}

#[derive(Args, Debug)]
pub struct LocalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Rational prime below the place (both places above a split prime
    /// carry the same term).
    #[arg(long, conflicts_with = "place", required_unless_present = "place")]
    pub prime: Option<u64>,
    #[arg(long, value_enum)]
    pub place: Option<PlaceArg>,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, value_enum, default_value_t = RouteArg::Closed)]
    pub route: RouteArg,
    /// Truncation height of the contour route.
    #[arg(long, default_value_t = 200.0)]
    pub height: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ZeroTarget {
    #[arg(long, default_value = "zeta")]
    pub kind: String,
    #[arg(long, default_value_t = 1)]
    pub conductor: u64,
}

impl ZeroTarget {
    fn id(&self) -> Result<LFunctionId> {
        let kind: LKind = self.kind.parse()?;
        LFunctionId::from_parts(kind, self.conductor)
    }
}

#[derive(Subcommand, Debug)]
pub enum ZerosCommand {
    /// Find and certify zeros up to a height and store them in the cache.
    Compute {
        #[command(flatten)]
        target: ZeroTarget,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Check a zero file, re-certify it and add it to the cache.
    Import {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Write a cached list (computed first if needed) to a file.
    Export {
        #[command(flatten)]
        target: ZeroTarget,
        #[arg(long)]
        file: PathBuf,
        /// Compute up to this height if the cache does not reach it.
        #[arg(long)]
        height: Option<f64>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Re-certify a zero file without touching the cache.
    Certify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Contents of a `verify` config file.
#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub d: Option<i64>,
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub height: Option<f64>,
    pub tol: Option<f64>,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Fully resolved `verify` settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d: i64,
    pub function: String,
    pub height: f64,
    pub tol: f64,
    pub cache_dir: PathBuf,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Merge flags over the config file over defaults.
    pub fn resolve(args: &VerifyArgs) -> Result<RunConfig> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| Error::InvalidInput(format!("{}: {}", path.display(), e.message())))?
            }
            None => FileConfig::default(),
        };
        let d = args
            .d
            .or(file.d)
            .ok_or_else(|| Error::InvalidInput("a field is required (--d)".into()))?;
        let function = args
            .function
            .clone()
            .or(file.function)
            .ok_or_else(|| Error::InvalidInput("a test function is required (--fn)".into()))?;
        let height = args.height.or(file.height).unwrap_or(DEFAULT_HEIGHT);
        let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        for (name, v) in [("height", height), ("tol", tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(RunConfig {
            d,
            function,
            height,
            tol,
            cache_dir: cache_dir(args.cache_dir.clone().or(file.cache_dir)),
            output: args.output.clone().or(file.output),
        })
    }
}

fn cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) => EXIT_USAGE,
        Error::UnsupportedField(_) => EXIT_UNSUPPORTED,
        _ => EXIT_FAIL,
    }
}

fn num(x: f64) -> String {
    fmt_sig(x + 0.0, DIGITS)
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::Uncertified(_) = e {
                let _ = writeln!(err, "hint: run `explicit-formula zeros compute` for the missing L-function and height");
            }
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Field(a) => cmd_field(&a, out),
        Command::Local(a) => cmd_local(&a, out, err),
        Command::Zeros(z) => cmd_zeros(z, out),
        Command::Verify(a) => cmd_verify(&a, out),
    }
}

pub fn cmd_field(args: &FieldArgs, out: &mut dyn Write) -> Result<i32> {
    let field = FieldSpec::from_d_or_discriminant(args.d)?;
    writeln!(out, "field        {field}")?;
    writeln!(out, "class number {}", if field.class_number_one { "1" } else { "> 1" })?;
    writeln!(out, "ramified")?;
    for place in ramified_places(&field) {
        writeln!(out, "  p={:<6} N(p)={:<6} N(d)={}", place.p.unwrap(), place.norm.unwrap(), place.different_norm)?;
    }
    writeln!(out, "primes up to {}", args.bound)?;
    writeln!(out, "  {:>6}  {:<9} {:>8}  {:>6}", "p", "type", "N(p)", "places")?;
    for p in primes_up_to(args.bound) {
        let place = splitting_type(&field, p)?;
        writeln!(
            out,
            "  {:>6}  {:<9} {:>8}  {:>6}",
            p,
            place.kind.to_string(),
            place.norm.unwrap(),
            place.places_above
        )?;
    }
    Ok(EXIT_PASS)
}

fn local_place(args: &LocalArgs, field: &FieldSpec) -> Result<PlaceInfo> {
    match (args.prime, args.place) {
        (_, Some(PlaceArg::Complex)) => Ok(PlaceInfo::COMPLEX),
        (Some(p), None) => {
            if !primes_up_to(p).last().is_some_and(|&q| q == p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            splitting_type(field, p)
        }
        (None, None) => Err(Error::InvalidInput("give --prime or --place complex".into())),
    }
}

pub fn cmd_local(args: &LocalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let field = FieldSpec::from_d_or_discriminant(args.d)?;
    let f = TestFunction::parse(&args.function)?;
    let place = local_place(args, &field)?;
    let routes: &[Route] = match args.route {
        RouteArg::Closed => &[Route::ClosedForm],
        RouteArg::Contour => &[Route::Contour],
        RouteArg::Fd => &[Route::FiniteDifference],
        RouteArg::All => &[Route::ClosedForm, Route::Contour, Route::FiniteDifference],
    };
    let mut terms: Vec<LocalTerm> = Vec::new();
    for route in routes {
        let term = match route {
            Route::ClosedForm => localterms::w_closed_form(&place, &f)?,
            Route::Contour => localterms::w_contour(&place, &f, 0.5, args.height)?,
            Route::FiniteDifference => localterms::w_finite_difference_default(&place, &f)?,
        };
        if let Some(w) = &term.warning {
            writeln!(err, "warning: {w}")?;
        }
        terms.push(term);
    }
    if args.json {
        let rounded: Vec<LocalTerm> = terms
            .iter()
            .map(|t| LocalTerm {
                value: crate::numeric::round_sig(t.value, DIGITS),
                error_estimate: crate::numeric::round_sig(t.error_estimate, DIGITS),
                ..t.clone()
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&rounded).expect("serializable"))?;
        return Ok(EXIT_PASS);
    }
    writeln!(out, "place {place}  f = {}", f.label())?;
    for t in &terms {
        writeln!(
            out,
            "  {:<18} {:>20}  (error estimate {:.1e})",
            t.route.as_str(),
            num(t.value),
            t.error_estimate
        )?;
    }
    if terms.len() > 1 {
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                writeln!(
                    out,
                    "  {} - {}: {:.3e}",
                    terms[i].route.as_str(),
                    terms[j].route.as_str(),
                    terms[i].value - terms[j].value
                )?;
            }
        }
    }
    Ok(EXIT_PASS)
}

fn open_store(flag: Option<PathBuf>) -> Result<ZeroStore> {
    ZeroStore::directory(cache_dir(flag))
}

fn describe(list: &zeros::ZeroList, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "{}: {} zeros up to {}, certified={}",
        list.id,
        list.ordinates.len(),
        num(list.height),
        u8::from(list.certified)
    )?;
    Ok(())
}

pub fn cmd_zeros(command: ZerosCommand, out: &mut dyn Write) -> Result<i32> {
    match command {
        ZerosCommand::Compute { target, height, cache_dir } => {
            let store = open_store(cache_dir)?;
            let id = target.id()?;
            let list = store.get_or_compute(&id, height)?;
            describe(&list, out)?;
            if let Some(path) = store.path_for(&id) {
                writeln!(out, "cache {}", path.display())?;
            }
            Ok(EXIT_PASS)
        }
        ZerosCommand::Import { file, cache_dir } => {
            let store = open_store(cache_dir)?;
            let list = store.import(&file)?;
            describe(&list, out)?;
            Ok(EXIT_PASS)
        }
        ZerosCommand::Export { target, file, height, cache_dir } => {
            let store = open_store(cache_dir)?;
            let id = target.id()?;
            let list = match (store.load(&id)?, height) {
                (_, Some(h)) => store.get_or_compute(&id, h)?,
                (Some(list), None) => list,
                (None, None) => {
                    return Err(Error::Uncertified(format!(
                        "no cached zeros for {id}; pass --height to compute them"
                    )))
                }
            };
            zeros::export_zeros(&list, &file)?;
            describe(&list, out)?;
            writeln!(out, "wrote {}", file.display())?;
            Ok(EXIT_PASS)
        }
        ZerosCommand::Certify { file } => {
            let list = zeros::certify(&zeros::import_zeros(&file)?)?;
            describe(&list, out)?;
            Ok(if list.certified { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn write_report(path: Option<&Path>, json: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, json)?,
        None => out.write_all(json.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let config = RunConfig::resolve(args)?;
    let field = FieldSpec::from_d_or_discriminant(config.d)?;
    let f = TestFunction::parse(&config.function)?;
    if f.is_zero() {
        return Err(Error::InvalidInput("the test function vanishes identically".into()));
    }
    explicit::require_class_number_one(&field)?;
    let store = ZeroStore::directory(&config.cache_dir)?;
    let report = explicit::verify(&field, &f, config.height, config.tol, &store)?;
    write_report(config.output.as_deref(), &report.to_json(), out)?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}
