//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 usage, 2 ambiguous orbit without fallback,
//! 3 convergence or verification failure in a computation, 4 a failed
//! property check under `verify`.

mod config;
mod output;
mod verify;

pub use output::{records_csv, records_json, Failure, Format, ScanRecord, Status, CSV_HEADER};
pub use verify::{Budget, CheckResult, Suite};

use crate::error::Error;
use crate::exponent::{
    dimension_nonmonotonicity_witness, gamma_statistics, interval_holder_probe, measure_scaling_probe,
    pointwise_exponent, ScaleConfig,
};
use crate::fair::{
    acip_interval_mass, dimension_from_entropy, fair_cdf_fixed_point, fair_entropy, fair_entropy_series,
    AcipBudget, AcipMethod, EntropyEnclosure, DEFAULT_MAX_ITER,
};
use crate::params::{
    boundary_parameter, boundary_residual, entropy_difference_identity_check, find_special_parameters,
    lap_containing, lap_partition, window_index, LapBudget, SpecialKind,
};
use crate::tent::{TentContext, SQRT2};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_AMBIGUOUS: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "fairtent", version, about = "Fair measures and fair entropy of tent maps")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fair entropy H(a) at one parameter or over a uniform grid.
    Entropy(EntropyArgs),
    /// Boundary parameters 𝕒_r.
    Boundaries(BoundariesArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Scan a quantity over a parameter grid.
    Scan(ScanArgs),
    /// Lap census of φ_n over a parameter interval.
    Laps(LapsArgs),
    /// Parameters whose critical orbit lands on c or on q_r.
    Special(SpecialArgs),
    /// Hölder exponent experiments.
    Exponent(ExponentArgs),
    /// Mass of an interval under the a.c.i.p.
    Acip(AcipArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Grid {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub a_lo: Option<f64>,
    #[arg(long)]
    pub a_hi: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
}

impl Grid {
    fn points(&self) -> Result<Vec<f64>, String> {
        let pts = match (self.a, self.a_lo, self.a_hi, self.count) {
            (Some(a), None, None, _) => vec![a],
            (None, Some(lo), Some(hi), count) => {
                let n = count.unwrap_or(1);
                if n == 0 {
                    return Err("--count must be at least 1".into());
                }
                if !(lo <= hi) {
                    return Err(format!("--a-lo {lo} exceeds --a-hi {hi}"));
                }
                if n == 1 {
                    vec![lo]
                } else {
                    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
                }
            }
            _ => return Err("give either --a or --a-lo, --a-hi and --count".into()),
        };
        if let Some(&bad) = pts.iter().find(|&&a| !(SQRT2 - 1e-15..=2.0).contains(&a)) {
            return Err(format!("a = {bad} lies outside [√2, 2]"));
        }
        Ok(pts)
    }
}

#[derive(Args, Debug, Clone)]
pub struct Sink {
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Phi,
    Both,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub grid: Grid,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "series")]
    pub method: MethodArg,
    /// Grid size of the Φ oracle.
    #[arg(long, default_value_t = 1 << 14)]
    pub phi_grid: usize,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Args, Debug)]
pub struct BoundariesArgs {
    #[arg(long, default_value_t = 12)]
    pub r_max: usize,
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "full")]
    pub budget: Budget,
    /// Write the JSON failure list here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Entropy,
    Dimension,
    Gamma,
    Beta,
    Laps,
    Boundaries,
    Verify,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Entropy => "entropy",
            Quantity::Dimension => "dimension",
            Quantity::Gamma => "gamma",
            Quantity::Beta => "beta",
            Quantity::Laps => "laps",
            Quantity::Boundaries => "boundaries",
            Quantity::Verify => "verify",
        }
    }
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub grid: Grid,
    #[arg(long, value_enum, default_value = "entropy")]
    pub quantity: Quantity,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Orbit length for `gamma`, lap level for `laps` and `verify`.
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Args, Debug)]
pub struct LapsArgs {
    #[arg(long)]
    pub a_lo: f64,
    #[arg(long)]
    pub a_hi: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_laps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpecialArgs {
    #[arg(long)]
    pub a_lo: f64,
    #[arg(long)]
    pub a_hi: f64,
    /// `P`, `Q1`, `Q(2)`, ...
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExponentMode {
    Pointwise,
    Gamma,
    Probe,
    Scaling,
    Witness,
}

#[derive(Args, Debug)]
pub struct ExponentArgs {
    #[arg(long, value_enum, default_value = "pointwise")]
    pub mode: ExponentMode,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub a_lo: Option<f64>,
    #[arg(long)]
    pub a_hi: Option<f64>,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Window index for `scaling` (default: the window of `a`).
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 15)]
    pub depth: usize,
    /// Orbit length for `gamma`.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub delta0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 20)]
    pub rungs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AcipArgs {
    #[arg(long)]
    pub a: f64,
    /// `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long, default_value = "birkhoff")]
    pub method: String,
    #[arg(long, default_value_t = 10_000_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1 << 14)]
    pub bins: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ParameterOutOfRange(_) | Error::Domain(_) | Error::Precondition(_) | Error::NotInjective { .. } => {
            EXIT_USAGE
        }
        Error::AmbiguousSymbols { .. } | Error::AmbiguousOrbit { .. } => EXIT_AMBIGUOUS,
        _ => EXIT_CONVERGENCE,
    }
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(exit_code(&e), e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail(EXIT_USAGE, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Some(path) = config::config_path(&args) {
        match config::load(path.as_ref()) {
            Ok(entries) => config::merge(&mut args, &entries),
            Err(e) => {
                eprintln!("error: {}", e.0);
                return EXIT_USAGE;
            }
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, Fail> {
    match cmd {
        Command::Entropy(a) => cmd_entropy(a),
        Command::Boundaries(a) => cmd_boundaries(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Laps(a) => cmd_laps(a),
        Command::Special(a) => cmd_special(a),
        Command::Exponent(a) => cmd_exponent(a),
        Command::Acip(a) => cmd_acip(a),
    }
}

fn write_records(sink: &Sink, config: Value, records: &[ScanRecord], failures: &[Failure]) -> Result<(), Fail> {
    let text = match sink.format {
        Format::Csv => records_csv(records),
        Format::Json => records_json(config, records, failures),
    };
    output::emit(&text, sink.out.as_deref())?;
    Ok(())
}

fn write_json<T: serde::Serialize>(v: &T, out: Option<&std::path::Path>) -> Result<(), Fail> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| usage(e.to_string()))?;
    s.push('\n');
    output::emit(&s, out)?;
    Ok(())
}

fn from_enclosure(a: f64, e: &EntropyEnclosure, tol: f64) -> ScanRecord {
    let status = if e.ambiguous {
        Status::Ambiguous
    } else if e.radius <= tol {
        Status::Ok
    } else {
        Status::Failed
    };
    ScanRecord {
        a,
        value: e.h_value,
        radius: e.radius,
        status,
        method: e.method.to_string(),
        terms: e.terms_used,
        horizon: e.horizon,
        discrepancy: None,
    }
}

/// Most severe exit code among the rows.
fn summarise(records: &[ScanRecord], failures: &[Failure], fail_code: i32) -> i32 {
    if records.iter().any(|r| r.status == Status::Ambiguous) {
        EXIT_AMBIGUOUS
    } else if !failures.is_empty() || records.iter().any(|r| r.status == Status::Failed) {
        fail_code
    } else {
        EXIT_OK
    }
}

fn check_tol(tol: f64) -> Result<(), Fail> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--tol {tol} must be positive")))
    }
}

fn cmd_entropy(args: EntropyArgs) -> Result<i32, Fail> {
    let pts = args.grid.points().map_err(usage)?;
    check_tol(args.tol)?;
    let tol = args.tol;
    let rows: Vec<Result<ScanRecord, (f64, Error)>> = pts
        .par_iter()
        .map(|&a| {
            let ctx = TentContext::with_default_tier(a).map_err(|e| (a, e))?;
            let series = || fair_entropy_series(&ctx, tol);
            let phi = || fair_cdf_fixed_point(&ctx, args.phi_grid, tol.min(1e-12), DEFAULT_MAX_ITER).map(|x| x.1);
            let rec = match args.method {
                MethodArg::Series => from_enclosure(a, &series().map_err(|e| (a, e))?, tol),
                MethodArg::Phi => from_enclosure(a, &phi().map_err(|e| (a, e))?, tol),
                MethodArg::Both => {
                    let s = series().map_err(|e| (a, e))?;
                    let p = phi().map_err(|e| (a, e))?;
                    if s.ambiguous {
                        let mut r = from_enclosure(a, &p, tol);
                        r.discrepancy = Some(f64::NAN);
                        r
                    } else {
                        let mut r = from_enclosure(a, &s, tol);
                        r.discrepancy = Some((s.h_value - p.h_value).abs());
                        r
                    }
                }
            };
            Ok(rec)
        })
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut code = EXIT_CONVERGENCE;
    for r in rows {
        match r {
            Ok(rec) => records.push(rec),
            Err((a, e)) => {
                if matches!(e, Error::ParameterOutOfRange(_) | Error::Precondition(_)) {
                    code = EXIT_USAGE;
                }
                let method = match args.method {
                    MethodArg::Phi => "phi",
                    _ => "series",
                };
                records.push(ScanRecord::failed(a, method));
                failures.push(Failure { a, error: e.to_string() });
            }
        }
    }
    let config = json!({
        "command": "entropy",
        "points": pts.len(),
        "tol": tol,
        "method": format!("{:?}", args.method).to_lowercase(),
        "phi_grid": args.phi_grid,
        "precision": crate::tent::PrecisionTier::from_env(),
    });
    write_records(&args.sink, config, &records, &failures)?;
    Ok(summarise(&records, &failures, code))
}

fn cmd_boundaries(args: BoundariesArgs) -> Result<i32, Fail> {
    if args.r_max < 2 || args.r_max > 20 {
        return Err(usage(format!("--r-max {} must lie in 2..=20", args.r_max)));
    }
    check_tol(args.tol)?;
    let mut rows = Vec::new();
    for r in 2..=args.r_max {
        let a = boundary_parameter(r, args.tol)?;
        rows.push((r, a, boundary_residual(a, r)));
    }
    if let Some(w) = rows.windows(2).find(|w| !(w[0].1 < w[1].1)) {
        return Err(Fail(
            EXIT_CONVERGENCE,
            format!("boundary parameters not increasing at r = {}", w[1].0),
        ));
    }
    let text = match args.sink.format {
        Format::Csv => {
            let mut s = String::from("r,a_r,residual\n");
            for (r, a, res) in &rows {
                let _ = writeln!(s, "{r},{},{}", output::num(*a), output::num(*res));
            }
            s
        }
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(r, a, res)| json!({"r": r, "a_r": a, "residual": res}))
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({"boundaries": v})).unwrap_or_default();
            s.push('\n');
            s
        }
    };
    output::emit(&text, args.sink.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Fail> {
    let results = verify::run(args.suite, args.seed, args.budget);
    for r in &results {
        println!(
            "{} [{}] {}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.suite,
            r.name,
            r.detail
        );
    }
    let failures: Vec<&CheckResult> = results.iter().filter(|r| !r.pass).collect();
    let doc = json!({
        "suite": format!("{:?}", args.suite).to_lowercase(),
        "seed": args.seed,
        "checks": results.len(),
        "failures": failures,
    });
    match &args.out {
        Some(p) => write_json(&doc, Some(p))?,
        None if !failures.is_empty() => println!("{}", serde_json::to_string(&doc).unwrap_or_default()),
        None => {}
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_VERIFY })
}

fn scan_one(a: f64, q: Quantity, tol: f64, n: usize) -> crate::Result<ScanRecord> {
    let ctx = TentContext::with_default_tier(a)?;
    let base = |value: f64, method: &str, terms: usize, horizon: usize| ScanRecord {
        a,
        value,
        radius: 0.0,
        status: Status::Ok,
        method: method.into(),
        terms,
        horizon,
        discrepancy: None,
    };
    Ok(match q {
        Quantity::Entropy => from_enclosure(a, &fair_entropy(&ctx, tol)?, tol),
        Quantity::Dimension => {
            let la = a.ln();
            let e = fair_entropy(&ctx, tol * la / (2.0 * std::f64::consts::LN_2))?;
            let mut r = from_enclosure(a, &e, tol);
            r.value = dimension_from_entropy(a, e.h_value);
            r.radius = dimension_from_entropy(a, e.radius);
            r.status = if e.ambiguous || r.radius <= tol { Status::Ok } else { Status::Failed };
            r
        }
        Quantity::Gamma => {
            let s = gamma_statistics(a, n)?;
            let v = s.last_ratio().unwrap_or(f64::NAN);
            let mut r = base(v, "exact-orbit", s.rows.len(), s.horizon);
            if s.horizon < n {
                r.status = Status::Ambiguous;
            }
            r
        }
        Quantity::Beta => {
            let e = pointwise_exponent(a, &ScaleConfig::default())?;
            base(e.beta_hat, "ls-fit", e.usable_scale_count, e.gamma_horizon)
        }
        Quantity::Laps => {
            let lap = lap_containing(a, n)?;
            base(lap.width(), "lap-width", lap.gamma_prefix, n)
        }
        Quantity::Boundaries => {
            let r = window_index(a).unwrap_or(1);
            base(r as f64, "window", 0, 0)
        }
        Quantity::Verify => {
            let lap = lap_containing(a, n)?;
            let other = lap.a_left + 0.25 * lap.width();
            let probe = if (other - a).abs() < 1e-3 * lap.width() { lap.midpoint() } else { other };
            let a1 = if lap.contains(a) { a } else { lap.midpoint() };
            let rep = entropy_difference_identity_check(&lap, a1, probe, tol.max(1e-12))?;
            let mut r = base((rep.lhs - rep.rhs).abs(), "identity", lap.level, n);
            r.radius = tol.max(1e-12);
            if !rep.pass {
                r.status = Status::Failed;
            }
            r
        }
    })
}

fn cmd_scan(args: ScanArgs) -> Result<i32, Fail> {
    let pts = args.grid.points().map_err(usage)?;
    check_tol(args.tol)?;
    let rows: Vec<crate::Result<ScanRecord>> = pts
        .par_iter()
        .map(|&a| scan_one(a, args.quantity, args.tol, args.n))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (a, r) in pts.iter().zip(rows) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                let mut rec = ScanRecord::failed(*a, args.quantity.name());
                if matches!(e, Error::AmbiguousSymbols { .. } | Error::AmbiguousOrbit { .. }) {
                    rec.status = Status::Ambiguous;
                }
                records.push(rec);
                failures.push(Failure {
                    a: *a,
                    error: e.to_string(),
                });
            }
        }
    }
    let config = json!({
        "command": "scan",
        "a_lo": pts.first(),
        "a_hi": pts.last(),
        "count": pts.len(),
        "quantity": args.quantity.name(),
        "tol": args.tol,
        "seed": args.seed,
        "n": args.n,
        "precision": crate::tent::PrecisionTier::from_env(),
    });
    write_records(&args.sink, config, &records, &failures)?;
    Ok(summarise(&records, &failures, EXIT_CONVERGENCE))
}

pub const LAPS_HEADER: &str = "level,a_left,a_right,boundary_kind_left,boundary_kind_right,A,B,gamma_prefix";

fn cmd_laps(args: LapsArgs) -> Result<i32, Fail> {
    let budget = LapBudget {
        max_laps: args.max_laps,
        ..LapBudget::default()
    };
    let laps = lap_partition(args.a_lo, args.a_hi, args.n, &budget)?;
    let mut s = String::from(LAPS_HEADER);
    s.push('\n');
    for l in &laps {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            l.level,
            output::num(l.a_left),
            output::num(l.a_right),
            l.kind_left,
            l.kind_right,
            output::num(l.a_const),
            output::num(l.b_const),
            l.gamma_prefix
        );
    }
    output::emit(&s, args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_special(args: SpecialArgs) -> Result<i32, Fail> {
    let kind: SpecialKind = args.kind.parse()?;
    let found = find_special_parameters(args.a_lo, args.a_hi, kind, args.n_max)?;
    let mut s = String::from("a,n,residual\n");
    for p in &found {
        let _ = writeln!(s, "{},{},{}", output::num(p.a), p.n, output::num(p.residual));
    }
    output::emit(&s, args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Fail> {
    v.ok_or_else(|| usage(format!("--{flag} is required for this mode")))
}

fn cmd_exponent(args: ExponentArgs) -> Result<i32, Fail> {
    let out = args.out.as_deref();
    match args.mode {
        ExponentMode::Pointwise => {
            let cfg = ScaleConfig {
                delta0: args.delta0,
                rho: args.rho,
                rungs: args.rungs,
                ..ScaleConfig::default()
            };
            let e = pointwise_exponent(need(args.a, "a")?, &cfg)?;
            write_json(&e, out)?;
        }
        ExponentMode::Gamma => {
            let s = gamma_statistics(need(args.a, "a")?, args.n)?;
            let mut text = String::from("n,gamma,ratio\n");
            for r in &s.rows {
                let _ = writeln!(text, "{},{},{}", r.n, r.gamma, output::num(r.ratio));
            }
            output::emit(&text, out)?;
            if s.horizon < args.n {
                eprintln!("reliable horizon {} < {}", s.horizon, args.n);
                return Ok(EXIT_AMBIGUOUS);
            }
        }
        ExponentMode::Probe => {
            let p = interval_holder_probe(need(args.a_lo, "a-lo")?, need(args.a_hi, "a-hi")?, args.samples)?;
            write_json(&p, out)?;
        }
        ExponentMode::Scaling => {
            let a = need(args.a, "a")?;
            let r = args.r.or_else(|| window_index(a)).unwrap_or(2);
            let ctx = TentContext::with_default_tier(a)?;
            let rep = measure_scaling_probe(&ctx, r, args.depth)?;
            write_json(&rep, out)?;
            if !rep.pass {
                return Ok(EXIT_VERIFY);
            }
        }
        ExponentMode::Witness => {
            let w = dimension_nonmonotonicity_witness(need(args.a_lo, "a-lo")?, need(args.a_hi, "a-hi")?, args.samples)?;
            write_json(&w, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_acip(args: AcipArgs) -> Result<i32, Fail> {
    let (lo, hi) = args
        .interval
        .split_once(',')
        .and_then(|(l, h)| Some((l.trim().parse::<f64>().ok()?, h.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| usage(format!("--interval '{}' is not lo,hi", args.interval)))?;
    let method: AcipMethod = args.method.parse()?;
    let ctx = TentContext::with_default_tier(args.a)?;
    let budget = AcipBudget {
        iterations: args.iterations,
        seed: args.seed,
        bins: args.bins,
        ..AcipBudget::default()
    };
    let mass = acip_interval_mass(&ctx, lo, hi, method, &budget);
    write_json(
        &json!({"a": args.a, "lo": lo, "hi": hi, "method": args.method, "seed": args.seed, "mass": mass}),
        args.out.as_deref(),
    )?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid {
            a: None,
            a_lo: Some(1.5),
            a_hi: Some(1.9),
            count: Some(5),
        };
        assert_eq!(g.points().unwrap().len(), 5);
        let bad = Grid {
            a: Some(1.0),
            a_lo: None,
            a_hi: None,
            count: None,
        };
        assert!(bad.points().is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["fairtent", "entropy", "--a", "1"]), EXIT_USAGE);
        assert_eq!(run(["fairtent", "boundaries", "--r-max", "1"]), EXIT_USAGE);
        assert_eq!(run(["fairtent", "no-such-command"]), EXIT_USAGE);
    }

    #[test]
    fn ambiguity_without_fallback_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("h.csv");
        let code = run(["fairtent", "entropy", "--a", "2", "--out", out.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let sqrt2 = format!("{SQRT2}");
        let code = run(["fairtent", "entropy", "--a", &sqrt2, "--out", out.to_str().unwrap()]);
        assert_eq!(code, EXIT_AMBIGUOUS);
    }
}
