//! `sumsetlab` command line.
//!
//! Exit codes: 0 success or pass, 1 usage or input error, 2 a verifier
//! reported failure, 3 a hypothesis does not hold, 4 a capacity limit was hit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sumsetlab::exact::{parse_rational, to_f64, Rational};
use sumsetlab::experiments::{
    constant_estimation, extremal_search, simplex_doubling_table, tightness_example, write_estimate_csv,
    write_simplex_csv, EstimateTable, ExperimentGrid, Family, FrontierStore, SearchParams, SearchStrategy,
    SimplexRow, TightnessParams,
};
use sumsetlab::gap::{gap_hull, Gap, HullLimits, HullMode};
use sumsetlab::geometry::{cover_at_most, cover_number_capped, default_normal_bound, min_cover_count};
use sumsetlab::inequalities::{self as ineq, InequalityReport, Outcome, RealFunction};
use sumsetlab::lattice::{parse_point_set, point_set_to_text};
use sumsetlab::transforms::{compress, compress_fully, cube_summand_identity_check, ruzsa_cover};
use sumsetlab::{iterated_sumset, sumset, Caps, Error, PointSet};

const EXIT_USAGE: u8 = 1;
const EXIT_FAIL: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "sumsetlab", version, about = "Exact sumset computations and discrete Brunn-Minkowski checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; defaults to text for point sets, json for reports, csv for tables.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest point set an experiment may build.
    #[arg(long, global = true, default_value_t = Caps::default().max_points)]
    cap_points: u64,
    /// Largest number of normals a bounded cover search may enumerate.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap_enum: u64,
    /// Coordinate bound for cover normals; defaults to twice the diameter.
    #[arg(long, global = true)]
    normal_bound: Option<u64>,
    #[arg(long, global = true, env = "SUMSETLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Statement {
    Bm,
    BmBoxes,
    Superadditivity,
    Lev,
    ApContainment,
    Plunnecke,
    BoxShrinking,
    Stability,
    CubeSummand,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A + B.
    Sumset { a: PathBuf, b: PathBuf },
    /// h-fold sumset h.A.
    Iterate {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        h: u64,
    },
    /// Fewest parallel hyperplanes covering a set.
    Cover {
        #[arg(long)]
        set: PathBuf,
        /// Coordinate bound for the normal search (same as --normal-bound).
        #[arg(long)]
        bound: Option<u64>,
        /// Search all normals instead of a bounded box.
        #[arg(long)]
        exact: bool,
        /// Only decide whether n hyperplanes suffice.
        #[arg(long)]
        at_most: Option<u64>,
    },
    /// Smallest X + P containing a one-dimensional set.
    GapHull {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = HullLimits::default().max_points)]
        max_points: usize,
        #[arg(long, default_value_t = HullLimits::default().max_diameter)]
        max_diameter: u64,
    },
    /// Compression along one axis, or along all axes until stable.
    Compress {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, required_unless_present = "full")]
        axis: Option<usize>,
        #[arg(long)]
        full: bool,
    },
    /// Greedy X with A contained in X + B - B.
    RuzsaCover {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Check one inequality on the given inputs.
    Verify(Box<VerifyArgs>),
    /// Doubling of the discrete simplex.
    SimplexTable {
        #[arg(long)]
        k_max: usize,
        #[arg(long)]
        n_max: u64,
    },
    /// Interval plus points in general position.
    Tightness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: String,
        #[arg(long)]
        m: u64,
        /// Allow parameters outside the asymptotic regime.
        #[arg(long)]
        no_regime: bool,
    },
    /// Minimal doubling among sets with cover number above n.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value = "local")]
        strategy: String,
        /// JSON-lines frontier to merge the result into.
        #[arg(long)]
        frontier: Option<PathBuf>,
    },
    /// Empirical constant over a grid of families and parameters.
    Estimate {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<String>,
        /// Comma-separated families, or "all".
        #[arg(long, default_value = "all")]
        family: String,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    id: Statement,
    #[arg(long, alias = "a")]
    set: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long)]
    x: Option<PathBuf>,
    #[arg(long)]
    y: Option<PathBuf>,
    #[arg(long)]
    z: Option<PathBuf>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long, default_value = "0")]
    eps: String,
    /// A GAP as "gap k=2 sides=4,4 coeffs=1,5 offset=-3".
    #[arg(long)]
    gap: Option<String>,
    /// Function files, one "x value" pair per line.
    #[arg(long)]
    f: Option<PathBuf>,
    #[arg(long)]
    g: Option<PathBuf>,
    #[arg(long)]
    h_fn: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    d: u32,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Usage(msg.into()))
}

fn read_set(path: &Path) -> Run<PointSet> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_point_set(&text)?)
}

fn need<'a>(v: &'a Option<PathBuf>, flag: &str) -> Run<&'a Path> {
    v.as_deref().ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn need_num<T: Copy>(v: Option<T>, flag: &str) -> Run<T> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn rational_arg(text: &str, flag: &str) -> Run<Rational> {
    parse_rational(text).ok_or_else(|| Failure::Usage(format!("--{flag}: {text:?} is not a rational number")))
}

fn read_function(path: &Path) -> Run<RealFunction> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut f = RealFunction::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Failure::Lib(Error::Parse { line: i + 1, msg: format!("expected 'x value', got {line:?}") });
        let mut words = line.split_whitespace();
        let x: i64 = words.next().and_then(|w| w.parse().ok()).ok_or_else(bad)?;
        let v = words.next().and_then(parse_rational).ok_or_else(bad)?;
        if words.next().is_some() {
            return Err(bad());
        }
        f.insert(x, v);
    }
    Ok(f)
}

/// Serialized output plus the exit status it implies.
struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

fn report_output(report: &InequalityReport, format: Option<Format>) -> Run<Output> {
    if matches!(format, Some(Format::Text | Format::Csv)) {
        return usage("reports are written as json");
    }
    let code = match report.outcome() {
        Outcome::Pass => 0,
        Outcome::Fail => EXIT_FAIL,
        Outcome::HypothesisViolated => EXIT_HYPOTHESIS,
    };
    Ok(Output { body: pretty(report)?, code })
}

fn pretty<T: serde::Serialize>(v: &T) -> Run<String> {
    Ok(serde_json::to_string_pretty(v).map_err(Error::from)? + "\n")
}

fn set_output(set: &PointSet, format: Option<Format>) -> Run<Output> {
    match format.unwrap_or(Format::Text) {
        Format::Text => Ok(Output::ok(point_set_to_text(set))),
        Format::Json => Ok(Output::ok(pretty(set)?)),
        Format::Csv => usage("point sets are written as text or json"),
    }
}

fn json_only<T: serde::Serialize>(v: &T, format: Option<Format>) -> Run<Output> {
    if matches!(format, Some(Format::Text | Format::Csv)) {
        return usage("this command writes json");
    }
    Ok(Output::ok(pretty(v)?))
}

fn simplex_output(rows: &[SimplexRow], format: Option<Format>) -> Run<Output> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_simplex_csv(rows, &mut buf)?;
            Ok(Output::ok(String::from_utf8(buf).expect("csv is utf-8")))
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k, "n": r.n, "size": r.size.to_string(), "sumset_size": r.sumset_size.to_string(),
                        "binomial_sumset_size": r.binomial_sumset_size.to_string(), "identity_holds": r.identity_holds,
                        "ratio": r.ratio.to_string(), "c_hat": r.c_hat.to_string(), "c_hat_approx": to_f64(&r.c_hat),
                        "k_over_4": r.k_over_4.to_string(),
                    })
                })
                .collect();
            Ok(Output::ok(pretty(&rows)?))
        }
        Format::Text => usage("tables are written as csv or json"),
    }
}

fn estimate_output(table: &EstimateTable, format: Option<Format>) -> Run<Output> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_estimate_csv(&table.rows, &mut buf)?;
            Ok(Output::ok(String::from_utf8(buf).expect("csv is utf-8")))
        }
        Format::Json => {
            let rows: Vec<_> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "family": r.family.name(), "k": r.k, "n": r.n, "t": r.t.to_string(), "seed": r.seed,
                        "max_points": r.max_points, "size_a": r.size_a, "size_b": r.size_b,
                        "sumset_size": r.sumset_size, "t_actual": r.t_actual.to_string(),
                        "hypothesis_holds": r.hypothesis_holds, "bm_holds": r.bm_holds,
                        "c_hat_lo": r.c_hat_lo.to_string(), "c_hat_hi": r.c_hat_hi.to_string(), "c_hat": r.c_hat(),
                    })
                })
                .collect();
            let maxima: Vec<_> = table
                .maxima
                .iter()
                .map(|m| json!({"k": m.k, "t": m.t.to_string(), "n": m.n, "family": m.family.name(), "c_hat": m.c_hat}))
                .collect();
            Ok(Output::ok(pretty(&json!({"rows": rows, "maxima": maxima}))?))
        }
        Format::Text => usage("tables are written as csv or json"),
    }
}

fn verify(args: &VerifyArgs, format: Option<Format>) -> Run<Output> {
    let eps = rational_arg(&args.eps, "eps")?;
    let gap = || -> Run<Gap> {
        let text = args.gap.as_deref().ok_or_else(|| Failure::Usage("--gap is required".into()))?;
        Ok(text.parse::<Gap>()?)
    };
    let report = match args.id {
        Statement::Bm => ineq::verify_bm(
            &read_set(need(&args.set, "set")?)?,
            &read_set(need(&args.b, "b")?)?,
            need_num(args.n, "n")?,
            &eps,
        )?,
        Statement::BmBoxes => ineq::verify_bm_in_boxes(
            &read_set(need(&args.y, "y")?)?,
            &read_set(need(&args.z, "z")?)?,
            &gap()?,
            need_num(args.ell, "ell")?,
            need_num(args.n, "n")?,
        )?,
        Statement::Superadditivity => ineq::verify_superadditivity(
            &read_function(need(&args.f, "f")?)?,
            &read_function(need(&args.g, "g")?)?,
            &read_function(need(&args.h_fn, "h-fn")?)?,
            args.d,
        )?,
        Statement::Lev => ineq::verify_lev(&read_set(need(&args.set, "set")?)?, need_num(args.h, "h")?)?,
        Statement::ApContainment => ineq::verify_ap_containment(&read_set(need(&args.set, "set")?)?, need_num(args.m, "m")?)?,
        Statement::Plunnecke => ineq::verify_plunnecke(
            &read_set(need(&args.set, "set")?)?,
            &read_set(need(&args.b, "b")?)?,
            need_num(args.ell, "ell")?,
        )?,
        Statement::BoxShrinking => ineq::verify_box_shrinking(
            &gap()?,
            &read_set(need(&args.x, "x")?)?,
            &read_set(need(&args.b, "b")?)?,
            need_num(args.ell, "ell")?,
            need_num(args.m, "m")?,
        )?,
        Statement::Stability => ineq::verify_stability_containment(
            &read_set(need(&args.set, "set")?)?,
            &read_set(need(&args.b, "b")?)?,
            &gap()?,
        )?,
        Statement::CubeSummand => {
            cube_summand_identity_check(&read_set(need(&args.set, "set")?)?, &read_set(need(&args.b, "b")?)?)?
        }
    };
    report_output(&report, format)
}

fn families(spec: &str) -> Run<Vec<Family>> {
    if spec == "all" {
        return Ok(Family::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse::<Family>().map_err(Failure::from)).collect()
}

fn run(cli: &Cli) -> Run<Output> {
    let g = &cli.global;
    let caps = Caps { max_points: g.cap_points };
    let format = g.format;
    match &cli.command {
        Command::Sumset { a, b } => set_output(&sumset(&read_set(a)?, &read_set(b)?)?, format),
        Command::Iterate { set, h } => set_output(&iterated_sumset(&read_set(set)?, *h)?, format),
        Command::Cover { set, bound, exact, at_most } => {
            let b = read_set(set)?;
            if let Some(n) = at_most {
                let cert = cover_at_most(&b, *n)?;
                return json_only(&json!({"n": n, "covered": cert.is_some(), "certificate": cert}), format);
            }
            let cert = if *exact {
                min_cover_count(&b)?
            } else {
                let bound = bound.or(g.normal_bound).unwrap_or_else(|| default_normal_bound(&b));
                cover_number_capped(&b, bound, g.cap_enum)?
            };
            json_only(&cert, format)
        }
        Command::GapHull { set, n, k, mode, max_points, max_diameter } => {
            let mode: HullMode = mode.parse()?;
            let limits = HullLimits { max_points: *max_points, max_diameter: *max_diameter };
            json_only(&gap_hull(&read_set(set)?, *n, *k, mode, limits)?, format)
        }
        Command::Compress { set, axis, full } => {
            let a = read_set(set)?;
            let out = if *full { compress_fully(&a)? } else { compress(&a, axis.expect("required by clap"))? };
            set_output(&out, format)
        }
        Command::RuzsaCover { a, b } => set_output(&ruzsa_cover(&read_set(a)?, &read_set(b)?)?, format),
        Command::Verify(args) => verify(args, format),
        Command::SimplexTable { k_max, n_max } => simplex_output(&simplex_doubling_table(*k_max, *n_max, &caps)?, format),
        Command::Tightness { k, n, t, m, no_regime } => {
            let params =
                TightnessParams { k: *k, n: *n, t: rational_arg(t, "t")?, m: *m, seed: g.seed, enforce_regime: !no_regime };
            report_output(&tightness_example(&params, &caps)?.report, format)
        }
        Command::Search { k, n, size, budget, strategy, frontier } => {
            let strategy: SearchStrategy = strategy.parse()?;
            let params = SearchParams { k: *k, n: *n, size: *size, budget: *budget, strategy, seed: g.seed };
            let rec = extremal_search(&params)?;
            if let Some(path) = frontier {
                let mut store = FrontierStore::open(path)?;
                let written = store.merge(rec.clone())?;
                eprintln!("frontier {}: {}", path.display(), if written { "record appended" } else { "no improvement" });
            }
            json_only(&rec, format)
        }
        Command::Estimate { k, n, t, family } => {
            let ts = t.iter().map(|s| rational_arg(s, "t")).collect::<Run<Vec<_>>>()?;
            let grid =
                ExperimentGrid { ks: k.clone(), ns: n.clone(), ts, families: families(family)?, seed: g.seed, caps };
            estimate_output(&constant_estimation(&grid)?, format)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool: {e}");
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.global.out {
        Some(path) => fs::write(path, &out.body),
        None => std::io::stdout().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(out.code)
}
