//! `hh`: evaluate bound chains, run campaigns and search for counterexamples.
//!
//! Standard output carries only JSON (or JSON lines); diagnostics go to
//! standard error. Exit codes: 0 pass, 1 a chain failed, 2 bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use hh_core::harness::{run_campaign, search_cor3_counterexample, seed::child_seed, CampaignConfig, HarnessError};
use hh_core::quadrature::sample_uniform;
use hh_core::registry::{BoundInputs, CenteredSub, Homothety, Mixture, TruthCache};
use hh_core::tolerance::{DEFAULT_MC_SAMPLES, TOL_CHAIN};
use hh_core::{ChainRegistry, ConvexFunction, Point, Simplex};

#[derive(Parser)]
#[command(name = "hh", version, about = "Hermite–Hadamard bounds on simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bound chains for one simplex and one function (JSON lines).
    Bounds(BoundsArgs),
    /// Run a randomized verification campaign.
    Campaign(CampaignArgs),
    /// Search for a hinge violating the weighted-window chain.
    #[command(name = "cor3-search")]
    Cor3Search(SearchArgs),
    /// Draw uniform points from a simplex (JSON lines).
    Sample(SampleArgs),
}

#[derive(clap::Args)]
struct BoundsArgs {
    #[arg(long)]
    simplex: PathBuf,
    #[arg(long)]
    function: PathBuf,
    /// Chain name; repeatable. Defaults to every chain applicable to the dimension.
    #[arg(long = "theorem")]
    theorems: Vec<String>,
    /// `centroid` or comma-separated coordinates. Used as the refinement point
    /// and as the center of the prescribed-centroid subsimplex.
    #[arg(long, default_value = "centroid")]
    point: String,
    /// Scale of the subsimplex homothetic about the centroid.
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Scale of the prescribed-centroid subsimplex as a fraction of its maximum.
    #[arg(long, default_value_t = 0.5)]
    scale: f64,
    /// 1-based vertex index for thm3; all vertices when omitted.
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Window half-width for cor3; defaults to the threshold.
    #[arg(long)]
    y: Option<f64>,
    #[arg(long, env = "HH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
    #[arg(long, default_value_t = TOL_CHAIN)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CampaignArgs {
    /// Campaign configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long, env = "HH_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    mc_samples: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write slack statistics as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    y: f64,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, env = "HH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SampleArgs {
    #[arg(long)]
    simplex: PathBuf,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, env = "HH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error of the input, reported with exit code 2.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes everything at once, so a failed run leaves no partial output.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn parse_point(text: &str, s: &Simplex) -> Result<Point> {
    if text.trim() == "centroid" {
        return Ok(s.centroid());
    }
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad coordinate {c:?} in --point")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Point::new(coords)?)
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode, Usage> {
    let simplex = Simplex::from_json(&read(&args.simplex)?)
        .with_context(|| format!("invalid simplex in {}", args.simplex.display()))?;
    let function = ConvexFunction::from_json(&read(&args.function)?)
        .with_context(|| format!("invalid function in {}", args.function.display()))?;
    let point = parse_point(&args.point, &simplex)?;
    let registry = ChainRegistry::builtin();
    let theorems: Vec<String> = if args.theorems.is_empty() {
        registry
            .names()
            .into_iter()
            .filter(|n| simplex.dim() == 1 || !n.starts_with("cor"))
            .map(String::from)
            .collect()
    } else {
        args.theorems.clone()
    };
    if let Some(bad) = theorems.iter().find(|t| registry.get(t).is_none()) {
        return Err(anyhow!("unknown theorem {bad:?}; known: {}", registry.names().join(", ")).into());
    }
    if !(args.tolerance >= 0.0) {
        return Err(anyhow!("--tolerance must be nonnegative, got {}", args.tolerance).into());
    }
    if !(args.scale > 0.0 && args.scale <= 1.0) {
        return Err(anyhow!("--scale must lie in (0, 1], got {}", args.scale).into());
    }
    let vertex = match args.j {
        Some(0) => return Err(anyhow!("--j is 1-based").into()),
        Some(j) => Some(j - 1),
        None => None,
    };

    let mut inputs = BoundInputs::with_defaults(simplex.clone(), function);
    let limit = simplex.centered_scale_limit(&point)?;
    let homothety = Homothety {
        scale: args.t,
        permutation: None,
    };
    let sub = homothety.build(&simplex)?;
    inputs.mixture = Mixture {
        betas: vec![1.0 / sub.vertex_count() as f64; sub.vertex_count()],
        points: sub.vertices().to_vec(),
    };
    inputs.homothety = homothety;
    inputs.vertex = vertex;
    inputs.centered = CenteredSub {
        center: point.clone(),
        scale: args.scale * limit,
    };
    inputs.point = point;
    inputs.tolerance_floor = args.tolerance;
    if let Some(case) = inputs.interval.as_mut() {
        case.lambda = args.lambda;
        case.p = args.p;
        case.q = args.q;
        case.y = args
            .y
            .unwrap_or_else(|| hh_core::bounds::cor3_threshold(args.p, args.q, case.a, case.b));
    }

    let seeds = [0, 1, 2, 3].map(|d| child_seed(args.seed, d));
    let mut truths = TruthCache::new(args.mc_samples, seeds);
    let mut lines = String::new();
    let mut violated = false;
    for name in &theorems {
        let reports = registry
            .evaluate(name, &inputs, &mut truths)
            .with_context(|| format!("{name} cannot be evaluated"))?;
        for report in reports {
            violated |= report.is_violation();
            lines.push_str(&serde_json::to_string(&report)?);
            lines.push('\n');
        }
    }
    emit(args.out.as_deref(), &lines)?;
    Ok(if violated { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_campaign(args: CampaignArgs) -> Result<ExitCode, Usage> {
    let mut cfg = match &args.config {
        Some(path) => {
            CampaignConfig::from_json(&read(path)?).with_context(|| format!("invalid config {}", path.display()))?
        }
        None => CampaignConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(n) = args.mc_samples {
        cfg.mc_samples = n;
    }
    if let Some(n) = args.trials {
        cfg.trials_per_theorem = n;
    }
    if let Some(t) = args.tolerance {
        cfg.tolerance = t;
    }
    cfg.validate(&ChainRegistry::builtin())?;
    // Fail on an unwritable destination before spending the campaign.
    for path in [&args.out, &args.csv].into_iter().flatten() {
        fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let result = run_campaign(&cfg)?;
    eprintln!(
        "{} trials, {} failures, {:.1} s",
        cfg.trials_per_theorem,
        result.failure_count(),
        result.wall_time.as_secs_f64()
    );
    for (name, t) in &result.totals {
        eprintln!("  {name}: {} pass, {} fail", t.pass, t.fail);
    }
    if let Some(path) = &args.csv {
        fs::write(path, result.slack_csv()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut json = result.to_json();
    json.push('\n');
    emit(args.out.as_deref(), &json)?;
    Ok(if result.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_cor3_search(args: SearchArgs) -> Result<ExitCode, Usage> {
    if !(args.p > 0.0 && args.q > 0.0 && args.y > 0.0) {
        return Err(anyhow!("p, q and y must be positive").into());
    }
    let witness = match search_cor3_counterexample(args.p, args.q, args.a, args.b, args.y, args.budget, args.seed) {
        Err(e @ HarnessError::ConditionNotViolated { .. }) => return Err(e.into()),
        other => other?,
    };
    if witness.is_none() {
        eprintln!("no witness within {} evaluations", args.budget);
    }
    #[derive(serde::Serialize)]
    struct Output {
        witness: Option<hh_core::harness::Cor3Witness>,
    }
    let mut json = serde_json::to_string(&Output { witness })?;
    json.push('\n');
    emit(args.out.as_deref(), &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(args: SampleArgs) -> Result<ExitCode, Usage> {
    let simplex = Simplex::from_json(&read(&args.simplex)?)
        .with_context(|| format!("invalid simplex in {}", args.simplex.display()))?;
    let mut lines = String::new();
    for p in sample_uniform(&simplex, args.count, args.seed) {
        lines.push_str(&serde_json::to_string(&p)?);
        lines.push('\n');
    }
    emit(args.out.as_deref(), &lines)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Cor3Search(a) => cmd_cor3_search(a),
        Command::Sample(a) => cmd_sample(a),
    };
    match result {
        Ok(code) => code,
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

