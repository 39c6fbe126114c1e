//! Command-line harness: corpus generation, field file I/O, and batch drivers
//! for medians, sharp fields, cube decompositions, two-cube oscillation
//! profiles, tail experiments, and the randomized property suites.
//!
//! JSON goes to stdout with floats at 17 significant digits; bulk arrays go
//! to field or CSV files. Identical flags and seed produce byte-identical
//! output. Exit codes: 0 ok, 1 property violation, 2 I/O or malformed input,
//! 3 parameter violation. Errors print machine-readable JSON on stderr.
//! `MEDIANOSC_THREADS` caps internal parallelism.

use clap::{Args, Parser, Subcommand};
use medianosc::bmo::{
    bmo_phi_norm, fit_tail_curve, jn_tail, normalize_for_tail, vmo_embeds_in_vmo_check,
    vmo_modulus, Modulus,
};
use medianosc::corpus::{pair_counterexample, Corpus, CorpusSpec};
use medianosc::decompose::{
    jn_cascade, stromberg_decompose, two_threshold_decompose, DecompositionParams,
    DEFAULT_ETA_FRACTION,
};
use medianosc::error::Error;
use medianosc::grid::{CubeFamily, CubeRegion, SampledFunction};
use medianosc::io::{format_f64, read_field, to_json_string, write_csv_1d, write_field};
use medianosc::median::{maximal_median, median_counts, WeightedSamples};
use medianosc::oscillation::continuity_verdict;
use medianosc::props::{run_suite, Suite};
use medianosc::sharp::local_sharp_maximal;
use medianosc::Result;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "medianosc", version, about = "median oscillation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal median of a field over a region, with its defining counts.
    Median(MedianArgs),
    /// Per-cell local sharp maximal field.
    Sharp(SharpArgs),
    /// Median-threshold cube decomposition (single run or two-threshold).
    Decompose(DecomposeArgs),
    /// Two-cube oscillation profile and continuity verdict.
    Oscillation(OscillationArgs),
    /// Deviation-tail measurement with decay fit, optionally the cascade.
    Jn(JnArgs),
    /// Vanishing-oscillation modulus, optionally a norm and embedding check.
    Vmo(VmoArgs),
    /// Generate a corpus field file.
    Gen(GenArgs),
    /// Run a randomized property suite; nonzero exit on any violation.
    Propcheck(PropcheckArgs),
}

#[derive(Args)]
struct MedianArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    /// Sub-region as lo coordinates then side, comma-separated (default: full cube).
    #[arg(long)]
    region: Option<String>,
}

#[derive(Args)]
struct SharpArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    /// all | dyadic | dyadic-shifted | auto
    #[arg(long, default_value = "auto")]
    family: String,
    /// Write the sharp field to this field file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Run the two-threshold refinement instead of a single pass.
    #[arg(long)]
    two_threshold: bool,
    /// Slack for the two-threshold run (default: beta / 10).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, default_value = "auto")]
    family: String,
    /// Write a cell mask (0 outside, 1 selected, 2 discarded) as a field file.
    #[arg(long)]
    mask_out: Option<PathBuf>,
}

#[derive(Args)]
struct OscillationArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.75)]
    s: f64,
    /// Decreasing diameters: comma list, or lin:a:b:n / log:a:b:n.
    #[arg(long)]
    delta_grid: String,
    /// Override the verdict threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Write the profile as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct JnArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// const:C | power:EXP,SCALE | log:SCALE | table:FILE.csv
    #[arg(long, default_value = "const:1")]
    phi: String,
    /// Increasing thresholds: comma list, or lin:a:b:n / log:a:b:n.
    #[arg(long)]
    lambda_grid: String,
    /// Fit window as fractions of the cube measure.
    #[arg(long, default_value = "1e-3,1e-1")]
    fit_window: String,
    #[arg(long, default_value = "auto")]
    family: String,
    /// Write the tail curve as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also run the generational cascade on the normalized field.
    #[arg(long)]
    cascade: bool,
}

#[derive(Args)]
struct VmoArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    /// Increasing scales: comma list, or lin:a:b:n / log:a:b:n.
    #[arg(long)]
    u_grid: String,
    /// When given, also report the oscillation norm and the embedding check.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long, default_value = "auto")]
    family: String,
    /// Write the modulus as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// constant | step | paper-step | linear | lipschitz | spike |
    /// log-singularity | piecewise | checkerboard | pair-counterexample
    #[arg(long)]
    name: String,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    value: f64,
    #[arg(long, default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 1)]
    width: usize,
    #[arg(long, default_value_t = 0.5)]
    center: f64,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, default_value_t = 4)]
    block: usize,
    /// Biases for pair-counterexample.
    #[arg(long, default_value_t = 0.75)]
    s: f64,
    #[arg(long, default_value_t = 0.75)]
    s1: f64,
    /// Output path (pair-counterexample appends -f / -g before the extension).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PropcheckArgs {
    /// Suite name or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 200)]
    cases: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::InvalidParameter(msg);
    if let Some(rest) = text.strip_prefix("lin:").or_else(|| text.strip_prefix("log:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("grid '{text}' needs start:stop:count")));
        }
        let start: f64 = parts[0].parse().map_err(|e| bad(format!("grid start: {e}")))?;
        let stop: f64 = parts[1].parse().map_err(|e| bad(format!("grid stop: {e}")))?;
        let count: usize = parts[2].parse().map_err(|e| bad(format!("grid count: {e}")))?;
        if count < 2 {
            return Err(bad("grid needs at least two points".into()));
        }
        let log = text.starts_with("log:");
        if log && (start <= 0.0 || stop <= 0.0) {
            return Err(bad("log grid needs positive endpoints".into()));
        }
        Ok((0..count)
            .map(|i| {
                let frac = i as f64 / (count - 1) as f64;
                if log {
                    (start.ln() + frac * (stop.ln() - start.ln())).exp()
                } else {
                    start + frac * (stop - start)
                }
            })
            .collect())
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| bad(format!("grid entry '{p}': {e}"))))
            .collect()
    }
}

fn parse_family(text: &str, f: &SampledFunction) -> Result<CubeFamily> {
    if text == "auto" {
        Ok(CubeFamily::default_for(f.dim(), f.cells_per_side()))
    } else {
        CubeFamily::from_str(text)
    }
}

fn parse_modulus(text: &str) -> Result<Modulus> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidParameter(format!("modulus '{text}' needs kind:params")))?;
    let num = |p: &str| -> Result<f64> {
        p.parse()
            .map_err(|e| Error::InvalidParameter(format!("modulus parameter '{p}': {e}")))
    };
    match kind {
        "const" => Modulus::constant(num(rest)?),
        "power" => {
            let (a, c) = rest.split_once(',').ok_or_else(|| {
                Error::InvalidParameter("power modulus needs exponent,scale".into())
            })?;
            Modulus::power(num(a)?, num(c)?)
        }
        "log" => Modulus::log(num(rest)?),
        "table" => {
            let text = std::fs::read_to_string(rest)?;
            let mut knots = Vec::new();
            for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
                let (u, p) = line.split_once(',').ok_or_else(|| {
                    Error::Format(format!("table line '{line}' needs u,phi"))
                })?;
                knots.push((num(u.trim())?, num(p.trim())?));
            }
            Modulus::table(knots)
        }
        other => Err(Error::InvalidParameter(format!("unknown modulus kind '{other}'"))),
    }
}

fn parse_region(text: Option<&str>, f: &SampledFunction) -> Result<CubeRegion> {
    match text {
        None => Ok(f.full_region()),
        Some(spec) => {
            let parts: Vec<usize> = spec
                .split(',')
                .map(|p| {
                    p.trim().parse::<usize>().map_err(|e| {
                        Error::InvalidParameter(format!("region entry '{p}': {e}"))
                    })
                })
                .collect::<Result<_>>()?;
            if parts.len() != f.dim() + 1 {
                return Err(Error::InvalidParameter(format!(
                    "region needs {} corner coordinates plus a side",
                    f.dim()
                )));
            }
            let len = *parts.last().unwrap();
            f.region(parts[..f.dim()].to_vec(), len)
        }
    }
}

fn region_json(region: &CubeRegion) -> serde_json::Value {
    json!({ "lo": region.lo, "len": region.len, "measure": region.measure() })
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn emit(value: serde_json::Value) {
    println!("{}", to_json_string(&value));
}

fn cmd_median(args: &MedianArgs) -> Result<i32> {
    let f = read_field(&args.input)?;
    let region = parse_region(args.region.as_deref(), &f)?;
    let samples = WeightedSamples::from_region(&f, &region);
    let median = maximal_median(&samples, args.s)?;
    let counts = median_counts(&samples, median);
    let vol = samples.cell_volume();
    emit(json!({
        "s": args.s,
        "region": region_json(&region),
        "cells": samples.count(),
        "median": median,
        "counts": {
            "below": counts.below,
            "above": counts.above,
            "at_or_below": counts.at_or_below,
            "at_or_above": counts.at_or_above,
        },
        "measures": {
            "below": counts.below as f64 * vol,
            "above": counts.above as f64 * vol,
            "at_or_below": counts.at_or_below as f64 * vol,
            "at_or_above": counts.at_or_above as f64 * vol,
        },
    }));
    Ok(0)
}

fn cmd_sharp(args: &SharpArgs) -> Result<i32> {
    let f = read_field(&args.input)?;
    let family = parse_family(&args.family, &f)?;
    let region = f.full_region();
    let field = local_sharp_maximal(&f, &region, args.s, family)?;
    if let Some(path) = &args.out {
        write_field(path, &field.to_sampled(&f)?)?;
    }
    emit(json!({
        "s": args.s,
        "family": family.name(),
        "cells": field.values.len(),
        "min": field.min(),
        "max": field.max(),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    }));
    Ok(0)
}

fn write_mask(
    path: &Path,
    f: &SampledFunction,
    selected: &[usize],
    discarded: &[usize],
) -> Result<()> {
    let mut mask = vec![0.0; f.n_cells()];
    for &c in selected {
        mask[c] = 1.0;
    }
    for &c in discarded {
        mask[c] = 2.0;
    }
    let field = SampledFunction::new(
        f.dim(),
        f.origin().to_vec(),
        f.side(),
        f.cells_per_side(),
        mask,
    )?;
    write_field(path, &field)
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<i32> {
    let f = read_field(&args.input)?;
    let family = parse_family(&args.family, &f)?;
    let root = f.full_region();
    if args.two_threshold {
        let sharp = local_sharp_maximal(&f, &root, args.s, family)?;
        let beta = args.beta.unwrap_or_else(|| sharp.max().max(f64::MIN_POSITIVE));
        let eta = args.eta.unwrap_or(beta * DEFAULT_ETA_FRACTION);
        let out = two_threshold_decompose(&f, &root, args.s, args.t, beta, eta, Some(family))?;
        if let Some(path) = &args.mask_out {
            write_mask(path, &f, &out.fine.selected_cells(&f), &out.fine.discarded_cells(&f))?;
        }
        emit(serde_json::to_value(&out).expect("serializable"));
        return Ok(0);
    }
    let delta = args.delta.ok_or_else(|| {
        Error::InvalidParameter("single-run decomposition needs --delta".into())
    })?;
    let beta = args.beta.ok_or_else(|| {
        Error::InvalidParameter("single-run decomposition needs --beta".into())
    })?;
    let params = DecompositionParams::new(args.s, args.t, delta, beta)?;
    let sharp = local_sharp_maximal(&f, &root, args.s, family)?;
    let forest = stromberg_decompose(&f, &root, params, &sharp)?;
    if let Some(path) = &args.mask_out {
        write_mask(path, &f, &forest.selected_cells(&f), &forest.discarded_cells(&f))?;
    }
    emit(serde_json::to_value(&forest).expect("serializable"));
    Ok(0)
}

fn cmd_oscillation(args: &OscillationArgs) -> Result<i32> {
    let f = read_field(&args.input)?;
    let grid = parse_grid(&args.delta_grid)?;
    let report = continuity_verdict(&f, args.s, &grid, args.threshold)?;
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<f64>> = report
            .entries
            .iter()
            .map(|e| vec![e.delta, e.omega_estimate, e.modulus, e.ratio])
            .collect();
        write_csv(path, "delta,omega_estimate,modulus,ratio", &rows)?;
    }
    emit(serde_json::to_value(&report).expect("serializable"));
    Ok(0)
}

fn cmd_jn(args: &JnArgs) -> Result<i32> {
    let f = read_field(&args.input)?;
    let family = parse_family(&args.family, &f)?;
    let phi = parse_modulus(&args.phi)?;
    let grid = parse_grid(&args.lambda_grid)?;
    let window = {
        let parts = parse_grid(&args.fit_window)?;
        if parts.len() != 2 {
            return Err(Error::InvalidParameter("fit window needs lo,hi".into()));
        }
        (parts[0], parts[1])
    };
    let region = f.full_region();
    let curve = jn_tail(&f, &region, args.s, &grid, &phi, family)?;
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<f64>> = curve
            .lambdas
            .iter()
            .zip(&curve.measures)
            .map(|(&l, &m)| vec![l, m])
            .collect();
        write_csv(path, "lambda,measure", &rows)?;
    }
    let fit = fit_tail_curve(&curve, &phi, region.measure(), f.dim(), window);
    let mut payload = json!({
        "s": args.s,
        "phi": phi.describe(),
        "family": family.name(),
        "normalizer": curve.normalizer,
        "points": curve.lambdas.len(),
    });
    match fit {
        Ok(fit) => {
            payload["fit"] = serde_json::to_value(&fit).expect("serializable");
        }
        Err(e) => {
            payload["fit_error"] = json!(e.to_string());
        }
    }
    if args.cascade {
        let (g, norm) = normalize_for_tail(&f, args.s, &phi, family)?;
        let report = jn_cascade(&g, args.s, args.t, &phi, Some(family))?;
        payload["cascade"] = serde_json::to_value(&report).expect("serializable");
        payload["cascade_norm"] = json!(norm);
    }
    emit(payload);
    Ok(0)
}

fn cmd_vmo(args: &VmoArgs) -> Result<i32> {
    let f = read_field(&args.input)?;
    let family = parse_family(&args.family, &f)?;
    let grid = parse_grid(&args.u_grid)?;
    let region = f.full_region();
    let points = vmo_modulus(&f, &region, args.s, &grid, family)?;
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<f64>> = points.iter().map(|p| vec![p.u, p.phi_s]).collect();
        write_csv(path, "u,phi_s", &rows)?;
    }
    let mut payload = json!({
        "s": args.s,
        "family": family.name(),
        "modulus": serde_json::to_value(&points).expect("serializable"),
    });
    if let Some(phi_text) = &args.phi {
        let phi = parse_modulus(phi_text)?;
        payload["phi"] = json!(phi.describe());
        payload["norm"] = json!(bmo_phi_norm(&f, &region, args.s, &phi, family)?);
        let embedding = vmo_embeds_in_vmo_check(&f, &region, args.s, &phi, &grid, family)?;
        payload["embedding"] = serde_json::to_value(&embedding).expect("serializable");
    }
    emit(payload);
    Ok(0)
}

fn cmd_gen(args: &GenArgs) -> Result<i32> {
    if args.name == "pair-counterexample" {
        let pair = pair_counterexample(args.s, args.s1, args.n)?;
        let stem = args.out.with_extension("");
        let ext = args
            .out
            .extension()
            .map(|e| format!(".{}", e.to_string_lossy()))
            .unwrap_or_default();
        let f_path = PathBuf::from(format!("{}-f{ext}", stem.display()));
        let g_path = PathBuf::from(format!("{}-g{ext}", stem.display()));
        write_named(&f_path, &pair.f)?;
        write_named(&g_path, &pair.g)?;
        emit(json!({
            "name": args.name,
            "s": args.s,
            "s1": args.s1,
            "n": args.n,
            "t_boundary": pair.t_boundary,
            "files": [f_path.display().to_string(), g_path.display().to_string()],
        }));
        return Ok(0);
    }
    let corpus = match args.name.as_str() {
        "constant" => Corpus::Constant { value: args.value },
        "step" => Corpus::Step,
        "paper-step" => Corpus::PaperStep,
        "linear" => Corpus::Linear,
        "lipschitz" => Corpus::Lipschitz { l: args.l },
        "spike" => Corpus::Spike { width: args.width },
        "log-singularity" => Corpus::LogSingularity { center: args.center },
        "piecewise" => Corpus::Piecewise { levels: args.levels },
        "checkerboard" => Corpus::Checkerboard { block: args.block },
        other => {
            return Err(Error::InvalidParameter(format!("unknown corpus name '{other}'")))
        }
    };
    let spec = CorpusSpec { corpus, dim: args.dim, n_side: args.n, seed: args.seed };
    let field = spec.generate()?;
    write_named(&args.out, &field)?;
    emit(json!({
        "name": args.name,
        "dim": args.dim,
        "n": args.n,
        "seed": args.seed,
        "generator": medianosc::corpus::GENERATOR_NAME,
        "cells": field.n_cells(),
        "out": args.out.display().to_string(),
    }));
    Ok(0)
}

fn write_named(path: &Path, field: &SampledFunction) -> Result<()> {
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        write_csv_1d(path, field)
    } else {
        write_field(path, field)
    }
}

fn cmd_propcheck(args: &PropcheckArgs) -> Result<i32> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_str(&args.suite)?]
    };
    let reports: Vec<_> = suites
        .into_iter()
        .map(|s| run_suite(s, args.cases, args.seed))
        .collect();
    let failed = reports.iter().any(|r| !r.passed());
    emit(json!({
        "cases": args.cases,
        "seed": args.seed,
        "passed": !failed,
        "suites": serde_json::to_value(&reports).expect("serializable"),
    }));
    Ok(if failed { 1 } else { 0 })
}

fn configure_threads() {
    if let Ok(text) = std::env::var("MEDIANOSC_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Median(args) => cmd_median(args),
        Command::Sharp(args) => cmd_sharp(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Oscillation(args) => cmd_oscillation(args),
        Command::Jn(args) => cmd_jn(args),
        Command::Vmo(args) => cmd_vmo(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Propcheck(args) => cmd_propcheck(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            let code = if e.is_parameter_error() || matches!(e, Error::InvalidField(_)) {
                3
            } else {
                2
            };
            ExitCode::from(code)
        }
    }
}
