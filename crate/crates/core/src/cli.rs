//! Command-line front end.
//!
//! Exit statuses: 0 success, 1 verification found violations, 2 usage or
//! input error, 3 construction retries exhausted.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    count_solution_quintuples, distinct_distances, ffp_parallelogram_free, fit_growth_exponent,
    grid_distinct_distances, grid_pattern_census, montecarlo_containment, predicted_solution_count, valid_state_count,
    CensusReport, GrowthFit, CENSUS_BOUND, QUINTUPLE_BOUND,
};
use crate::construction::{
    construct_pipeline, sample_params, ConstructionConfig, ConstructionReport, DeletionMode, Ratio,
};
use crate::error::Error;
use crate::field::FpPoint;
use crate::io::{sha256_hex, to_csv, to_svg, write_atomic, PointsFile};
use crate::patterns::{
    concyclic_quadruples, enumerate_forbidden, find_collinear_triple, PatternCounts, PatternKind, ScanMode,
};
use crate::rng;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

const TOOL: &str = env!("CARGO_PKG_NAME");
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default number of forbidden quadruples listed by `verify` without `--full`.
const LIST_LIMIT: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "fivedist", version, about = "Grid subsets where any four points span five distinct distances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a verified pattern-free set from a random parabola.
    Construct(ConstructArgs),
    /// Scan a points file for forbidden quadruples.
    Verify(VerifyArgs),
    /// Exact per-pattern counts over full grids.
    Census(CensusArgs),
    /// Count distinct distances of a grid or a points file.
    Distances(DistancesArgs),
    /// Finite-field oracles for parabola containment and parallelograms.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub seed: u64,
    /// Refinement keep-probability, as `a/b` or a decimal.
    #[arg(long, default_value = "1/2")]
    pub epsilon: String,
    /// `greedy` or `all-points`.
    #[arg(long, default_value = "greedy")]
    pub mode: String,
    #[arg(long, default_value_t = 20)]
    pub max_retries: u32,
    /// Accepted |A| window half-width, in units of sqrt(n).
    #[arg(long, default_value_t = 10.0)]
    pub window: f64,
    /// Skip the final pass that deletes points until no four are concyclic.
    #[arg(long)]
    pub keep_concyclic: bool,
    /// Points file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Report path; defaults to the points path with a `.report.json` suffix.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Wall-clock timestamps and elapsed time go here, never into the report.
    #[arg(long)]
    pub timings: Option<PathBuf>,
    /// Print the report as JSON on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// List every forbidden quadruple instead of the first few.
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub json: bool,
    /// Also write the report to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "n_list"])))]
pub struct CensusArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Comma-separated grid sizes; growth exponents are fitted across them.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,
    #[arg(long)]
    pub json: bool,
    /// Permit grids above the default exhaustive bound.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["n", "input"])))]
pub struct DistancesArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exact", "montecarlo", "parallelogram"])))]
pub struct OracleArgs {
    #[arg(long)]
    pub p: u32,
    /// Four points as `(x,y);(x,y);(x,y);(x,y)`, reduced mod p.
    #[arg(long)]
    pub points: Option<String>,
    /// Count all valid parameter quintuples through the points.
    #[arg(long)]
    pub exact: bool,
    /// Estimate the containment probability by sampling.
    #[arg(long)]
    pub montecarlo: bool,
    /// Exhaustively scan random parabolas for parallelograms.
    #[arg(long)]
    pub parallelogram: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    /// Parabolas scanned in parallelogram mode.
    #[arg(long, default_value_t = 50)]
    pub samples: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance embedded in every report. Holds only deterministic fields.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    fn new(subcommand: &'static str, config: Value) -> Self {
        RunManifest { tool: TOOL, version: VERSION, subcommand, config, inputs: Vec::new(), outputs: Vec::new() }
    }
}

fn digest(path: &Path, bytes: &[u8]) -> FileDigest {
    FileDigest { path: path.display().to_string(), sha256: sha256_hex(bytes) }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn write_output(path: &Path, contents: &str, manifest: &mut RunManifest) -> Result<(), Failure> {
    write_atomic(path, contents.as_bytes())?;
    manifest.outputs.push(digest(path, contents.as_bytes()));
    Ok(())
}

/// Parses arguments and runs the subcommand, returning the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Construct(a) => cmd_construct(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Census(a) => cmd_census(&a),
        Command::Distances(a) => cmd_distances(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn default_report_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().map(OsString::from).unwrap_or_else(|| "points".into());
    name.push(".report.json");
    out.with_file_name(name)
}

fn unix_millis() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn cmd_construct(args: &ConstructArgs) -> CmdResult {
    let started = unix_millis();
    let clock = Instant::now();
    let config = ConstructionConfig {
        n: args.n,
        seed: args.seed,
        epsilon: args.epsilon.parse::<Ratio>()?,
        deletion_mode: args.mode.parse::<DeletionMode>()?,
        max_retries: args.max_retries,
        cardinality_window: args.window,
        remove_concyclic: !args.keep_concyclic,
    };
    config.validate()?;
    let report_path = args.report.clone().unwrap_or_else(|| default_report_path(&args.out));

    let outcome = construct_pipeline(&config);
    let p = crate::field::construction_prime(config.n)?;
    let mut resolved = serde_json::to_value(&config).expect("config serializes");
    resolved["p"] = json!(p);

    let code = match outcome {
        Ok(built) => {
            let report: &ConstructionReport = &built.report;
            resolved["params"] = serde_json::to_value(report.params).expect("params serialize");
            let mut manifest = RunManifest::new("construct", resolved);
            let points_text = PointsFile::from_set(&built.points, Some(report.params)).to_json();
            write_output(&args.out, &points_text, &mut manifest)?;
            if let Some(csv) = &args.csv {
                write_output(csv, &to_csv(&built.points), &mut manifest)?;
            }
            if let Some(svg) = &args.svg {
                write_output(svg, &to_svg(&built.points), &mut manifest)?;
            }
            let doc = json!({ "manifest": manifest, "status": "ok", "report": report });
            let text = pretty(&doc);
            write_atomic(&report_path, text.as_bytes())?;
            if args.json {
                print!("{text}");
            } else {
                let s = report.sizes;
                println!("parabola   {}", report.params);
                println!("sizes      initial {} -> refined {} -> final {}", s.initial, s.refined, s.final_);
                println!("distances  {}", report.distinct_distances);
                println!(
                    "verified   pattern-free {} general-position {} concyclic-free {} (attempt {})",
                    report.pattern_free, report.general_position, report.concyclic_free, report.attempts_used
                );
            }
            if report.verified {
                EXIT_OK
            } else {
                EXIT_VIOLATIONS
            }
        }
        Err(Error::RetriesExhausted { attempts }) => {
            let manifest = RunManifest::new("construct", resolved);
            let doc = json!({ "manifest": manifest, "status": "retries-exhausted", "attempts": attempts });
            let text = pretty(&doc);
            write_atomic(&report_path, text.as_bytes())?;
            eprintln!("error: no verified set after {} attempts", attempts.len());
            for a in &attempts {
                eprintln!("  {a}");
            }
            EXIT_EXHAUSTED
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &args.timings {
        let t = json!({
            "started_unix_ms": started,
            "finished_unix_ms": unix_millis(),
            "elapsed_ms": clock.elapsed().as_millis(),
        });
        write_atomic(path, pretty(&t).as_bytes())?;
    }
    Ok(code)
}

#[derive(Debug, Serialize)]
struct QuadrupleEntry {
    points: Vec<[i32; 2]>,
    patterns: Vec<&'static str>,
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let bytes =
        std::fs::read(&args.input).map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.input.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::usage("points file is not UTF-8"))?;
    let file = PointsFile::parse(&text)?;
    let set = file.to_set()?;

    let found = enumerate_forbidden(&set, ScanMode::Exhaustive);
    let counts = PatternCounts::tally(&found);
    let collinear = find_collinear_triple(&set);
    let concyclic = concyclic_quadruples(&set);
    let limit = if args.full { found.len() } else { LIST_LIMIT.min(found.len()) };
    let listed: Vec<QuadrupleEntry> = found[..limit]
        .iter()
        .map(|(q, pats)| QuadrupleEntry {
            points: q.points().iter().map(|p| [p.x, p.y]).collect(),
            patterns: pats.labels(),
        })
        .collect();

    let mut manifest = RunManifest::new("verify", json!({ "full": args.full }));
    manifest.inputs.push(digest(&args.input, &bytes));
    let doc = json!({
        "manifest": manifest,
        "n": set.n(),
        "size": set.len(),
        "counts": counts,
        "forbidden_total": counts.forbidden_total,
        "listed": listed.len(),
        "quadruples": listed,
        "general_position": collinear.is_none(),
        "collinear_triple": collinear.map(|t| t.map(|p| [p.x, p.y])),
        "concyclic_quadruples": concyclic.len(),
        "distinct_distances": distinct_distances(&set),
    });
    let out = pretty(&doc);
    if let Some(path) = &args.report {
        write_atomic(path, out.as_bytes())?;
    }
    if args.json {
        print!("{out}");
    } else {
        println!("points            {} in {}x{} grid", set.len(), set.n(), set.n());
        println!("forbidden         {}", counts.forbidden_total);
        for (k, c) in counts.iter() {
            println!("  {:<4} {c}", k.label());
        }
        for e in &listed {
            println!("  {:?} {:?}", e.points, e.patterns);
        }
        if listed.len() < found.len() {
            println!("  ... {} more (use --full)", found.len() - listed.len());
        }
        println!("general position  {}", collinear.is_none());
        println!("concyclic quads   {}", concyclic.len());
    }
    Ok(if counts.forbidden_total == 0 { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn cmd_census(args: &CensusArgs) -> CmdResult {
    let sizes: Vec<u32> = match (&args.n, &args.n_list) {
        (Some(n), None) => vec![*n],
        (None, Some(list)) if !list.is_empty() => list.clone(),
        _ => return Err(Failure::usage("give exactly one of --n or --n-list")),
    };
    if let Some(&big) = sizes.iter().find(|&&n| n > CENSUS_BOUND) {
        if !args.allow_large {
            return Err(Failure::usage(format!(
                "n = {big} exceeds the exhaustive census bound {CENSUS_BOUND} (pass --allow-large to override)"
            )));
        }
    }
    if let Some(&zero) = sizes.iter().find(|&&n| n == 0) {
        return Err(Failure::usage(format!("grid size {zero} must be positive")));
    }
    let reports: Vec<CensusReport> =
        sizes.iter().map(|&n| grid_pattern_census(n, args.allow_large)).collect::<Result<_, _>>()?;
    let mut fits: Vec<GrowthFit> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    if sizes.len() > 1 {
        for kind in PatternKind::ALL {
            match fit_growth_exponent(&reports, kind) {
                Ok(f) => fits.push(f),
                Err(e) => skipped.push(e.to_string()),
            }
        }
    }
    if args.json {
        let manifest = RunManifest::new("census", json!({ "sizes": sizes, "allow_large": args.allow_large }));
        let doc = json!({ "manifest": manifest, "censuses": reports, "fits": fits, "unfitted": skipped });
        print!("{}", pretty(&doc));
    } else {
        print!("{:>4} {:>12}", "n", "forbidden");
        for k in PatternKind::ALL {
            print!(" {:>10}", k.label());
        }
        println!();
        for r in &reports {
            print!("{:>4} {:>12}", r.n, r.counts.forbidden_total);
            for (_, c) in r.counts.iter() {
                print!(" {c:>10}");
            }
            println!();
        }
        for f in &fits {
            println!("slope {:<4} {:.3} (rms residual {:.3})", f.pattern, f.slope, f.residual);
        }
        for s in &skipped {
            println!("unfitted: {s}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_distances(args: &DistancesArgs) -> CmdResult {
    let (count, source) = match (&args.n, &args.input) {
        (Some(n), None) => {
            if *n == 0 || *n >= 1 << 16 {
                return Err(Failure::usage(format!("grid size {n} out of range")));
            }
            (grid_distinct_distances(*n), json!({ "n": n }))
        }
        (None, Some(path)) => {
            let (_, set) = PointsFile::read(path)?;
            (distinct_distances(&set), json!({ "in": path.display().to_string() }))
        }
        _ => return Err(Failure::usage("give exactly one of --n or --in")),
    };
    if args.json {
        let manifest = RunManifest::new("distances", source);
        print!("{}", pretty(&json!({ "manifest": manifest, "distinct_distances": count })));
    } else {
        println!("{count}");
    }
    Ok(EXIT_OK)
}

/// Parses `(x,y);(x,y);...`.
pub fn parse_points(list: &str) -> Result<Vec<(i64, i64)>, Error> {
    let bad = |s: &str| Error::InvalidArgument(format!("cannot parse point {s:?}"));
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad(s))?;
            let (x, y) = inner.split_once(',').ok_or_else(|| bad(s))?;
            Ok((x.trim().parse().map_err(|_| bad(s))?, y.trim().parse().map_err(|_| bad(s))?))
        })
        .collect()
}

fn four_points(args: &OracleArgs) -> Result<[FpPoint; 4], Failure> {
    let list = args.points.as_deref().ok_or_else(|| Failure::usage("--points is required for this mode"))?;
    let pts = parse_points(list)?;
    let pts: [(i64, i64); 4] =
        pts.try_into().map_err(|v: Vec<_>| Failure::usage(format!("expected 4 points, got {}", v.len())))?;
    Ok(pts.map(|(x, y)| FpPoint::new(x, y, args.p)))
}

fn cmd_oracle(args: &OracleArgs) -> CmdResult {
    let p = args.p;
    if p.is_multiple_of(2) || !crate::field::is_prime(p.into()) {
        return Err(Failure::usage(format!("{p} is not an odd prime")));
    }
    let mut config = json!({ "p": p });
    let result: Value;
    let headline: String;

    if args.exact {
        if p > QUINTUPLE_BOUND {
            return Err(Failure::usage(format!("exact mode needs p <= {QUINTUPLE_BOUND}")));
        }
        let pts = four_points(args)?;
        config["points"] = json!(args.points);
        config["mode"] = json!("exact");
        let count = count_solution_quintuples(p, &pts)?;
        let predicted = predicted_solution_count(p, &pts)?;
        let states = valid_state_count(p);
        headline = count.to_string();
        result = json!({
            "count": count,
            "predicted": predicted,
            "valid_states": states,
            "probability": count as f64 / states as f64,
        });
    } else if args.montecarlo {
        let seed = args.seed.ok_or_else(|| Failure::usage("--montecarlo requires --seed"))?;
        let pts = four_points(args)?;
        config["points"] = json!(args.points);
        config["mode"] = json!("montecarlo");
        config["trials"] = json!(args.trials);
        config["seed"] = json!(seed);
        let mut rng = rng::stream(seed, rng::MONTECARLO_STREAM);
        let est = montecarlo_containment(p, &pts, args.trials, &mut rng)?;
        headline =
            format!("{:.6e} [{:.6e}, {:.6e}] ({} / {})", est.estimate, est.ci_low, est.ci_high, est.hits, est.trials);
        result = serde_json::to_value(&est).expect("estimate serializes");
    } else {
        let seed = args.seed.ok_or_else(|| Failure::usage("--parallelogram requires --seed"))?;
        config["mode"] = json!("parallelogram");
        config["samples"] = json!(args.samples);
        config["seed"] = json!(seed);
        let mut rng = rng::stream(seed, rng::PARAMS_STREAM);
        let mut with_parallelogram = 0u32;
        for _ in 0..args.samples {
            let params = sample_params(p, &mut rng)?;
            if !ffp_parallelogram_free(&params)? {
                with_parallelogram += 1;
            }
        }
        headline = format!("{with_parallelogram} of {} parabolas contain a parallelogram", args.samples);
        result = json!({ "samples": args.samples, "with_parallelogram": with_parallelogram });
    }

    if args.json {
        let manifest = RunManifest::new("oracle", config);
        print!("{}", pretty(&json!({ "manifest": manifest, "result": result })));
    } else {
        println!("{headline}");
    }
    Ok(EXIT_OK)
}
