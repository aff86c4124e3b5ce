//! The `tvr` command line.

use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::arith::PrecisionPolicy;
use crate::coloring::enumerate_admissible;
use crate::polytope::{build_polytope, ehrhart_samples, ehrhart_volume, fit_leading_coefficient, mc_volume, AdmissibilityPolytope, VolumeEstimate};
use crate::triangulation::{homology_z2, parse_triangulation, GluingTable, Skeleton};
use crate::tv::{
    estimator_report, fit_constant, fit_model1, fit_model2, log_quantity, optimize_triangulation, s_r, tv_invariant,
    tv_sequence, write_csv, ColorMode, FitResult, StateSum, TVSeries, TvOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "TVR_THREADS";

#[derive(Parser, Debug)]
#[command(name = "tvr", version, about = "Turaev-Viro invariants of triangulated closed 3-manifolds")]
pub struct Cli {
    /// Worker threads (default: $TVR_THREADS, then the available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report failures as a JSON object on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counts, Euler check, mod-2 homology and polytope dimension.
    Info { path: PathBuf },
    /// TV_r at a single order.
    Tv {
        path: PathBuf,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// TV_r for every odd r in a range, as JSON lines or CSV.
    Sequence {
        path: PathBuf,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Keep the records already in --out and compute only the missing orders.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Limit of (2π/r) log TV_r, used for the s_r column of CSV output.
        #[arg(long)]
        target: Option<f64>,
        /// Write "ms":0 instead of measured times, for byte-reproducible files.
        #[arg(long)]
        no_timings: bool,
    },
    /// Number of admissible colorings and backtracking nodes per order.
    Count {
        path: PathBuf,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Admissibility polytope, lattice-point counts and volume estimates.
    Polytope {
        path: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Even dilations for a least-squares Ehrhart fit (default: exact
        /// interpolation along a detected period, else a fit).
        #[arg(long, value_delimiter = ',')]
        dilations: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random walk of bistellar moves looking for a cheaper triangulation.
    Optimize {
        path: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
        /// Largest size visited, as a multiple of the input size.
        #[arg(long, default_value_t = 3)]
        size_factor: usize,
        /// Where to write the best triangulation (the report goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coloring-count estimator against actual counts and tree sizes.
    Ratios {
        path: PathBuf,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fits a convergence model to a series file.
    Fit {
        /// JSON-lines series written by `sequence`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        target: f64,
        /// 1: a log(x+b)/(x+b) on S_r. 2: a/(x+b)+c on (2π/r) log TV_r.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
        model: u8,
        /// Smallest order used in the fit.
        #[arg(long, default_value_t = 3)]
        r_min: u32,
        /// Gnuplot data file: r, log quantity, model curve, S_r.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct RangeArgs {
    #[arg(long, default_value_t = 3)]
    r_min: u32,
    #[arg(long)]
    r_max: u32,
}

#[derive(Args, Debug, Clone, Copy)]
struct PrecisionArgs {
    /// Initial mantissa width in bits.
    #[arg(long, default_value_t = 128)]
    bits: u32,
    #[arg(long, default_value_t = 1e-6)]
    tau: f64,
    #[arg(long, default_value_t = 1e-10)]
    zero_threshold: f64,
    #[arg(long, default_value_t = 1 << 16)]
    max_bits: u32,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Auto,
    Integer,
    General,
}

impl From<Mode> for ColorMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => ColorMode::Auto,
            Mode::Integer => ColorMode::IntegerOnly,
            Mode::General => ColorMode::General,
        }
    }
}

impl PrecisionArgs {
    fn options(&self) -> Result<TvOptions, Failure> {
        if self.bits < 32 || !self.bits.is_power_of_two() {
            return Err(Failure::usage(format!("--bits must be a power of two >= 32, got {}", self.bits)));
        }
        if !(self.tau > 0.0 && self.zero_threshold > 0.0) {
            return Err(Failure::usage("--tau and --zero-threshold must be positive"));
        }
        let policy = PrecisionPolicy {
            initial_bits: self.bits,
            tau: self.tau,
            zero_threshold: self.zero_threshold,
            max_bits: self.max_bits,
        };
        Ok(TvOptions { policy, mode: self.mode.into() })
    }
}

impl RangeArgs {
    fn orders(&self) -> Result<Vec<u32>, Failure> {
        if self.r_min < 3 || self.r_min % 2 == 0 || self.r_max % 2 == 0 || self.r_min > self.r_max {
            return Err(Failure::usage(format!(
                "--r-min and --r-max must be odd with 3 <= r-min <= r-max, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        Ok((self.r_min..=self.r_max).step_by(2).collect())
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "usage", message: message.into() }
    }
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, kind: "input", message: message.to_string() }
    }
    fn compute(message: impl ToString) -> Self {
        Failure { code: EXIT_COMPUTE, kind: "computation", message: message.to_string() }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::compute(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<GluingTable, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_triangulation(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn skeleton_of(table: &GluingTable) -> Result<Skeleton, Failure> {
    Skeleton::new(table).map_err(Failure::input)
}

/// Output file or stdout.
fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_failure(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_all(w: &mut dyn Write, text: &str) -> Result<(), Failure> {
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| Failure::compute(e.to_string()))
}

fn cmd_info(path: &Path) -> Result<(), Failure> {
    let table = load(path)?;
    let s = skeleton_of(&table)?;
    let h = homology_z2(&s);
    let (v, e, f, n) = (s.vertex_count(), s.edge_count(), s.triangle_count(), s.tetrahedron_count());
    println!(
        "v={v} e={e} f={f} n={n} h1={} fastpath={} euler={} dim={} oriented={}",
        h.h1_z2_rank,
        if h.integer_fast_path_allowed() { "yes" } else { "no" },
        if e == n + v { "ok" } else { "violated" },
        build_polytope(&s).dim,
        if table.oriented().is_some() { "yes" } else { "no" },
    );
    Ok(())
}

fn cmd_tv(path: &Path, r: u32, precision: &PrecisionArgs) -> Result<(), Failure> {
    let table = load(path)?;
    if r < 3 || r % 2 == 0 {
        return Err(Failure::usage(format!("--r must be odd and at least 3, got {r}")));
    }
    let rec = tv_invariant(&table, r, &precision.options()?).map_err(Failure::compute)?;
    println!("{}", rec.to_json_line(true));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sequence(
    path: &Path,
    range: &RangeArgs,
    precision: &PrecisionArgs,
    output: &OutputArgs,
    resume: bool,
    target: Option<f64>,
    no_timings: bool,
) -> Result<(), Failure> {
    let table = load(path)?;
    range.orders()?;
    let options = precision.options()?;
    let timings = !no_timings;
    if output.format == Format::Csv {
        let mut series = tv_sequence(&table, range.r_min, range.r_max, &options, Vec::new(), |_| Ok(()))
            .map_err(Failure::compute)?;
        series.target_limit = target;
        let mut buf = Vec::new();
        write_csv(&series, &mut buf).map_err(Failure::compute)?;
        return write_all(&mut *sink(output.out.as_deref())?, &String::from_utf8_lossy(&buf));
    }

    let previous = match (&output.out, resume) {
        (Some(p), true) if p.exists() => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            TVSeries::from_json_lines(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
        }
        _ => Vec::new(),
    };
    // New records are appended as soon as they exist so an interrupted run
    // can be resumed; the file is rewritten in order at the end.
    let mut w: Box<dyn Write> = match &output.out {
        Some(p) => Box::new(
            OpenOptions::new()
                .create(true)
                .append(resume)
                .write(true)
                .truncate(!resume)
                .open(p)
                .map_err(|e| io_failure(p, e))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let series = tv_sequence(&table, range.r_min, range.r_max, &options, previous.clone(), |rec| {
        writeln!(w, "{}", rec.to_json_line(timings))?;
        w.flush()
    })
    .map_err(Failure::compute)?;
    drop(w);

    if let (Some(p), true) = (&output.out, resume) {
        let mut all: Vec<_> = previous.into_iter().filter(|rec| rec.r < range.r_min || rec.r > range.r_max).collect();
        all.extend(series.records);
        all.sort_by_key(|rec| rec.r);
        let text: String = all.iter().map(|rec| rec.to_json_line(timings) + "\n").collect();
        let tmp = p.with_extension("tmp");
        std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, p)).map_err(|e| io_failure(p, e))?;
    }
    Ok(())
}

fn cmd_count(path: &Path, range: &RangeArgs, mode: Mode, output: &OutputArgs) -> Result<(), Failure> {
    let table = load(path)?;
    let orders = range.orders()?;
    let plan = StateSum::new(&table, mode.into()).map_err(Failure::input)?;
    let mut text = String::new();
    if output.format == Format::Csv {
        text.push_str("r,admissible,nodes_visited\n");
    }
    for r in orders {
        let stats = enumerate_admissible(&plan.context(r), &mut |_: &[u32]| {});
        match output.format {
            Format::Json => {
                text.push_str(&json!({"r": r, "adm": stats.admissible_count, "nodes": stats.nodes_visited}).to_string());
                text.push('\n');
            }
            Format::Csv => text.push_str(&format!("{r},{},{}\n", stats.admissible_count, stats.nodes_visited)),
        }
    }
    write_all(&mut *sink(output.out.as_deref())?, &text)
}

fn polytope_json(p: &AdmissibilityPolytope) -> serde_json::Value {
    let rows: Vec<_> = p
        .rows
        .iter()
        .map(|row| json!({"coeffs": row.coeffs, "rhs": row.rhs_halves as f64 / 2.0}))
        .collect();
    json!({"dim": p.dim, "rows": rows})
}

fn cmd_polytope(
    path: &Path,
    mc_samples: u64,
    seed: u64,
    dilations: Option<Vec<u64>>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let table = load(path)?;
    let p = build_polytope(&skeleton_of(&table)?);
    let (fit, samples) = match dilations {
        Some(dilations) => {
            if let Some(k) = dilations.iter().find(|&&k| k == 0 || k % 2 == 1) {
                return Err(Failure::usage(format!("dilations must be even and positive, got {k}")));
            }
            let samples = ehrhart_samples(&p, &dilations);
            (fit_leading_coefficient(p.dim, &samples).map_err(Failure::compute)?, samples)
        }
        None => {
            let fit = ehrhart_volume(&p).map_err(Failure::compute)?;
            let samples = ehrhart_samples(&p, &fit.provenance);
            (fit, samples)
        }
    };
    let mc = mc_volume(&p, mc_samples, seed).map_err(Failure::compute)?;
    let mut doc = polytope_json(&p);
    let estimate = |v: &VolumeEstimate| json!({"value": v.value, "std_error": v.std_error, "method": v.method});
    doc["volume"] = estimate(&fit);
    doc["mc_volume"] = estimate(&mc);
    doc["samples"] = samples.iter().map(|s| json!([s.k, s.count])).collect();
    let text = serde_json::to_string_pretty(&doc).map_err(Failure::compute)? + "\n";
    write_all(&mut *sink(out)?, &text)
}

fn cmd_optimize(
    path: &Path,
    steps: usize,
    seed: u64,
    mc_samples: u64,
    size_factor: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let table = load(path)?;
    let cap = table.size() * size_factor.max(1);
    let (best, report) = optimize_triangulation(&table, steps, seed, mc_samples, cap).map_err(Failure::compute)?;
    if let Some(p) = out {
        write_all(&mut *sink(Some(p))?, &(best.to_json() + "\n"))?;
    }
    println!("{}", serde_json::to_string(&report).map_err(Failure::compute)?);
    Ok(())
}

fn cmd_ratios(path: &Path, range: &RangeArgs, output: &OutputArgs) -> Result<(), Failure> {
    let table = load(path)?;
    let orders = range.orders()?;
    let (volume, rows) = estimator_report(&table, &orders).map_err(Failure::compute)?;
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.6e}")).unwrap_or_default();
    let mut text = String::new();
    match output.format {
        Format::Json => {
            for row in &rows {
                let mut v = serde_json::to_value(row).map_err(Failure::compute)?;
                v["volume"] = json!(volume);
                text.push_str(&v.to_string());
                text.push('\n');
            }
        }
        Format::Csv => {
            text.push_str("r,admissible,estimator,estimate_ratio,nodes_visited,tree_ratio\n");
            for row in &rows {
                text.push_str(&format!(
                    "{},{},{:.6e},{},{},{}\n",
                    row.r,
                    row.admissible,
                    row.estimator,
                    opt(row.estimate_ratio),
                    row.nodes_visited,
                    opt(row.tree_ratio)
                ));
            }
        }
    }
    write_all(&mut *sink(output.out.as_deref())?, &text)
}

fn cmd_fit(data: &Path, target: f64, model: u8, r_min: u32, out: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(data).map_err(|e| Failure::input(format!("{}: {e}", data.display())))?;
    let records = TVSeries::from_json_lines(&text).map_err(|e| Failure::input(format!("{}: {e}", data.display())))?;
    let series = TVSeries { records, manifold_label: data.display().to_string(), target_limit: Some(target) };
    let mut lq = Vec::new();
    for rec in &series.records {
        if let Some(x) = log_quantity(rec).map_err(Failure::input)? {
            lq.push((rec.r, x));
        }
    }
    let sr = s_r(&series).map_err(Failure::input)?;
    let points: Vec<(f64, f64)> = match model {
        1 => &sr,
        _ => &lq,
    }
    .iter()
    .filter(|p| p.0 >= r_min)
    .map(|&(r, y)| (r as f64, y))
    .collect();
    let fit = if model == 1 { fit_model1(&points) } else { fit_model2(&points) }.map_err(Failure::compute)?;
    let constant = fit_constant(&points).map_err(Failure::compute)?;
    let doc = json!({
        "model": fit.model,
        "params": fit.params,
        "rss": fit.rss,
        "points_used": fit.points_used,
        "constant_rss": constant.rss,
    });
    println!("{doc}");
    if let Some(p) = out {
        write_all(&mut *sink(Some(p))?, &gnuplot_data(&series, &lq, &sr, &fit))?;
    }
    Ok(())
}

/// Whitespace-separated columns `r lq model s_r`, `?` where undefined.
fn gnuplot_data(series: &TVSeries, lq: &[(u32, f64)], sr: &[(u32, f64)], fit: &FitResult) -> String {
    let find = |v: &[(u32, f64)], r: u32| v.iter().find(|p| p.0 == r).map(|p| format!("{:.12e}", p.1));
    let mut text = String::from("# r log_quantity model s_r\n");
    for rec in &series.records {
        let r = rec.r;
        text.push_str(&format!(
            "{r} {} {:.12e} {}\n",
            find(lq, r).unwrap_or_else(|| "?".into()),
            fit.eval(r as f64),
            find(sr, r).unwrap_or_else(|| "?".into()),
        ));
    }
    text
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{THREADS_ENV} must be a thread count, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Info { path } => cmd_info(&path),
        Command::Tv { path, r, precision } => cmd_tv(&path, r, &precision),
        Command::Sequence { path, range, precision, output, resume, target, no_timings } => {
            cmd_sequence(&path, &range, &precision, &output, resume, target, no_timings)
        }
        Command::Count { path, range, mode, output } => cmd_count(&path, &range, mode, &output),
        Command::Polytope { path, mc_samples, seed, dilations, out } => {
            cmd_polytope(&path, mc_samples, seed, dilations, out.as_deref())
        }
        Command::Optimize { path, steps, seed, mc_samples, size_factor, out } => {
            cmd_optimize(&path, steps, seed, mc_samples, size_factor, out.as_deref())
        }
        Command::Ratios { path, range, output } => cmd_ratios(&path, &range, &output),
        Command::Fit { data, target, model, r_min, out } => cmd_fit(&data, target, model, r_min, out.as_deref()),
    }
}

fn report(failure: &Failure, json_errors: bool) {
    if json_errors {
        eprintln!("{}", json!({"error": failure.kind, "message": failure.message, "exit_code": failure.code}));
    } else {
        eprintln!("tvr: {}", failure.message);
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let json_errors = args.iter().any(|a| a == "--json-errors");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            if json_errors {
                report(&Failure::usage(e.kind().to_string()), true);
            } else {
                let _ = e.print();
            }
            return EXIT_USAGE;
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let json_errors = cli.json_errors;
    let result = thread_count(cli.threads).and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| Failure::usage(e.to_string()))?;
        pool.install(|| dispatch(cli))
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            report(&f, json_errors);
            f.code
        }
    }
}
