use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::seed::child_seed;
use super::HarnessError;
use crate::bounds::{cor3_threshold, ChainReport};
use crate::functions::{random_convex, FunctionKind};
use crate::registry::{
    tightness_ratio, BoundInputs, CenteredSub, ChainRegistry, Homothety, IntervalCase, Mixture, TruthCache,
};
use crate::simplex::{Point, Simplex};
use crate::tolerance::{CONDITION_LIMIT, DEFAULT_MC_SAMPLES, TOL_CHAIN};

fn default_kinds() -> Vec<FunctionKind> {
    FunctionKind::ALL.to_vec()
}

fn default_tolerance() -> f64 {
    TOL_CHAIN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub dimensions: Vec<usize>,
    pub trials_per_theorem: usize,
    pub mc_samples: usize,
    pub master_seed: u64,
    pub theorems: Vec<String>,
    pub subsimplex_scales: Vec<f64>,
    /// Function kinds trials draw from, uniformly.
    #[serde(default = "default_kinds")]
    pub kinds: Vec<FunctionKind>,
    /// Floor of the verdict tolerance.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for CampaignConfig {
    /// Dimensions 1 through 8, 10⁴ trials, 10⁵ Monte Carlo samples, every chain.
    fn default() -> Self {
        CampaignConfig {
            dimensions: (1..=8).collect(),
            trials_per_theorem: 10_000,
            mc_samples: DEFAULT_MC_SAMPLES,
            master_seed: 0x4848_2011,
            theorems: ChainRegistry::builtin().names().iter().map(|s| s.to_string()).collect(),
            subsimplex_scales: vec![0.1, 0.2, 0.4, 0.6, 0.8, 1.0],
            kinds: default_kinds(),
            tolerance: TOL_CHAIN,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self, registry: &ChainRegistry) -> Result<(), HarnessError> {
        let invalid = |m: String| Err(HarnessError::InvalidConfig(m));
        if self.dimensions.is_empty() || self.dimensions.contains(&0) {
            return invalid("dimensions must be a nonempty list of positive integers".into());
        }
        if self.trials_per_theorem == 0 {
            return invalid("trials_per_theorem must be at least 1".into());
        }
        if self.mc_samples < 2 {
            return invalid("mc_samples must be at least 2".into());
        }
        if self.theorems.is_empty() {
            return invalid("theorems must not be empty".into());
        }
        if let Some(bad) = self.theorems.iter().find(|t| registry.get(t).is_none()) {
            return Err(HarnessError::UnknownTheorem(bad.clone()));
        }
        if self.subsimplex_scales.is_empty() || self.subsimplex_scales.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
            return invalid("subsimplex_scales must be a nonempty list of values in (0, 1]".into());
        }
        if self.kinds.is_empty() {
            return invalid("kinds must not be empty".into());
        }
        if !(self.tolerance >= 0.0) || !self.tolerance.is_finite() {
            return invalid(format!("tolerance must be a nonnegative number, got {}", self.tolerance));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: CampaignConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        cfg.validate(&ChainRegistry::builtin())?;
        Ok(cfg)
    }

    fn trial_context(&self) -> TrialContext {
        TrialContext {
            mc_samples: self.mc_samples,
            kinds: self.kinds.clone(),
            scales: self.subsimplex_scales.clone(),
            tolerance: self.tolerance,
        }
    }
}

/// Everything besides `(dimension, seed)` that determines a trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialContext {
    pub mc_samples: usize,
    pub kinds: Vec<FunctionKind>,
    pub scales: Vec<f64>,
    pub tolerance: f64,
}

fn dirichlet(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    w
}

/// Standard-normal vertices, redrawn until the edge matrix is nondegenerate
/// and its condition number is at most [`CONDITION_LIMIT`].
pub fn random_simplex(dim: usize, rng: &mut impl Rng) -> Simplex {
    loop {
        let vertices: Vec<Vec<f64>> = (0..=dim)
            .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        if let Ok(s) = Simplex::from_coords(vertices) {
            if s.edge_condition_number() <= CONDITION_LIMIT {
                return s;
            }
        }
    }
}

/// Points `M_1..M_m` in `s` and weights `β` with `Σ β_j M_j` equal to the centroid.
///
/// The first `m-1` points are uniform samples pulled toward the centroid by a
/// common factor; the last point balances them, and the factor is chosen so
/// that it stays inside `s`.
fn centroid_mixture(s: &Simplex, rng: &mut impl Rng) -> Mixture {
    let k = s.vertex_count();
    let m = rng.random_range(1..=k + 1);
    if m == 1 {
        return Mixture {
            points: vec![s.centroid()],
            betas: vec![1.0],
        };
    }
    let u = 1.0 / k as f64;
    let betas = dirichlet(rng, m);
    let free: Vec<Vec<f64>> = (0..m - 1).map(|_| dirichlet(rng, k)).collect();
    let beta_last = betas[m - 1];
    // D_i = Σ_{j<m} β_j (λ_i(Q_j) - u); the balancing point has weights u - shrink·D_i/β_m.
    let drift: Vec<f64> = (0..k)
        .map(|i| free.iter().zip(&betas).map(|(q, b)| b * (q[i] - u)).sum())
        .collect();
    let shrink = drift
        .iter()
        .filter(|d| **d > 0.0)
        .map(|d| beta_last * u / d)
        .fold(1.0, f64::min);
    let mut points: Vec<Point> = free
        .iter()
        .map(|q| {
            let w: Vec<f64> = q.iter().map(|qi| u + shrink * (qi - u)).collect();
            s.combine(&w)
        })
        .collect();
    let last: Vec<f64> = drift.iter().map(|d| (u - shrink * d / beta_last).max(0.0)).collect();
    points.push(s.combine(&last));
    Mixture { points, betas }
}

fn pick<T: Copy>(rng: &mut impl Rng, items: &[T]) -> T {
    items[rng.random_range(0..items.len())]
}

/// A generated case and the seeds of its ground truths.
#[derive(Debug, Clone)]
pub struct TrialCase {
    pub inputs: BoundInputs,
    pub truth_seeds: [u64; 4],
}

impl TrialCase {
    /// Builds every parameter of every chain from a single seed, so the case
    /// does not depend on which chains are later evaluated.
    pub fn generate(dim: usize, seed: u64, ctx: &TrialContext) -> TrialCase {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let simplex = random_simplex(dim, &mut rng);
        let kind = pick(&mut rng, &ctx.kinds);
        let anchor = simplex.combine(&dirichlet(&mut rng, dim + 1));
        let function = random_convex(dim, kind, rng.next_u64()).with_kink_through(&anchor);

        let point = if rng.random_bool(0.1) {
            simplex.centroid()
        } else {
            simplex.combine(&dirichlet(&mut rng, dim + 1))
        };

        let mut perm: Vec<usize> = (0..=dim).collect();
        perm.shuffle(&mut rng);
        let homothety = Homothety {
            scale: pick(&mut rng, &ctx.scales),
            permutation: Some(perm),
        };

        let center = simplex.combine(&dirichlet(&mut rng, dim + 1));
        let fraction = pick(&mut rng, &ctx.scales);
        let limit = simplex.centered_scale_limit(&center).unwrap_or(0.0);
        let centered = CenteredSub {
            center,
            scale: fraction * limit,
        };

        let mixture = centroid_mixture(&simplex, &mut rng);

        let a: f64 = rng.sample(StandardNormal);
        let b = a + (0.5 * rng.sample::<f64, _>(StandardNormal)).exp();
        let kind_1d = pick(&mut rng, &ctx.kinds);
        let anchor_1d = Point::new(vec![a + (b - a) * rng.random::<f64>()]).expect("finite");
        let function_1d = random_convex(1, kind_1d, rng.next_u64()).with_kink_through(&anchor_1d);
        let lambda = rng.random::<f64>();
        let p = rng.random_range(0.1..3.0);
        let q = rng.random_range(0.1..3.0);
        let y = cor3_threshold(p, q, a, b) * (1.0 - rng.random::<f64>()).max(0.05);
        let interval = Some(IntervalCase {
            a,
            b,
            function: function_1d,
            lambda,
            p,
            q,
            y,
        });

        let truth_seeds = [rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64()];
        TrialCase {
            inputs: BoundInputs {
                simplex,
                function,
                point,
                homothety,
                vertex: None,
                centered,
                mixture,
                interval,
                tolerance_floor: ctx.tolerance,
            },
            truth_seeds,
        }
    }

    pub fn truths(&self, mc_samples: usize) -> TruthCache {
        TruthCache::new(mc_samples, self.truth_seeds)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassFail {
    pub pass: usize,
    pub fail: usize,
}

/// Order statistics of one slack position of one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackStats {
    pub theorem: String,
    pub slack_index: usize,
    pub min: f64,
    pub p50: f64,
    pub max: f64,
    pub n: usize,
}

/// Distribution of tightness ratios; `degenerate` counts 0/0 cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub n: usize,
    pub degenerate: usize,
    pub min: Option<f64>,
    pub p50: Option<f64>,
    pub max: Option<f64>,
}

/// A failing (or erroring) chain evaluation with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureDescriptor {
    pub theorem: String,
    pub trial: usize,
    pub dimension: usize,
    pub seed: u64,
    pub context: TrialContext,
    pub inputs: BoundInputs,
    pub report: Option<ChainReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub config: CampaignConfig,
    pub totals: BTreeMap<String, PassFail>,
    pub slack_stats: Vec<SlackStats>,
    pub tightness: BTreeMap<String, RatioSummary>,
    pub failures: Vec<FailureDescriptor>,
    /// Not serialized, so result files stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CampaignResult {
    pub fn failure_count(&self) -> usize {
        self.totals.values().map(|t| t.fail).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn stats(&self, theorem: &str) -> impl Iterator<Item = &SlackStats> {
        let theorem = theorem.to_string();
        self.slack_stats.iter().filter(move |s| s.theorem == theorem)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// `theorem,slack_index,min,p50,max,n` rows.
    pub fn slack_csv(&self) -> String {
        let mut out = String::from("theorem,slack_index,min,p50,max,n\n");
        for s in &self.slack_stats {
            out.push_str(&format!("{},{},{:e},{:e},{:e},{}\n", s.theorem, s.slack_index, s.min, s.p50, s.max, s.n));
        }
        out
    }
}

struct TrialOutcome {
    /// Per selected theorem: reports or the error message.
    results: Vec<Result<Vec<ChainReport>, String>>,
    dimension: usize,
    seed: u64,
}

fn run_trial(registry: &ChainRegistry, cfg: &CampaignConfig, ctx: &TrialContext, trial: usize) -> TrialOutcome {
    let dimension = cfg.dimensions[trial % cfg.dimensions.len()];
    let seed = child_seed(cfg.master_seed, trial as u64);
    let case = TrialCase::generate(dimension, seed, ctx);
    let mut truths = case.truths(ctx.mc_samples);
    let results = cfg
        .theorems
        .iter()
        .map(|name| registry.evaluate(name, &case.inputs, &mut truths).map_err(|e| e.to_string()))
        .collect();
    TrialOutcome {
        results,
        dimension,
        seed,
    }
}

/// Lower median of a nonempty sample.
fn order_stats(values: &mut [f64]) -> (f64, f64, f64) {
    values.sort_by(f64::total_cmp);
    (values[0], values[(values.len() - 1) / 2], values[values.len() - 1])
}

/// Runs every selected chain on `trials_per_theorem` generated cases.
///
/// Trial `i` uses dimension `dimensions[i % len]` and seed
/// `child_seed(master_seed, i)`. Trials run in parallel; aggregation happens
/// in trial order, so the result depends only on the configuration.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignResult, HarnessError> {
    let registry = ChainRegistry::builtin();
    cfg.validate(&registry)?;
    let start = Instant::now();
    let ctx = cfg.trial_context();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials_per_theorem)
        .into_par_iter()
        .map(|trial| run_trial(&registry, cfg, &ctx, trial))
        .collect();

    let mut totals: BTreeMap<String, PassFail> = BTreeMap::new();
    let mut slacks: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    let mut ratios: BTreeMap<String, (usize, Vec<f64>)> = BTreeMap::new();
    let mut failures = Vec::new();

    for (trial, outcome) in outcomes.into_iter().enumerate() {
        for (name, result) in cfg.theorems.iter().zip(outcome.results) {
            let entry = totals.entry(name.clone()).or_default();
            let describe = |report: Option<ChainReport>, error: Option<String>| FailureDescriptor {
                theorem: name.clone(),
                trial,
                dimension: outcome.dimension,
                seed: outcome.seed,
                context: ctx.clone(),
                inputs: TrialCase::generate(outcome.dimension, outcome.seed, &ctx).inputs,
                report,
                error,
            };
            match result {
                Err(msg) => {
                    entry.fail += 1;
                    failures.push(describe(None, Some(msg)));
                }
                Ok(reports) => {
                    let terms = registry.get(name).and_then(|c| c.tightness_terms());
                    for report in reports {
                        for (i, s) in report.slacks.iter().enumerate() {
                            slacks.entry((name.clone(), i)).or_default().push(*s);
                        }
                        if let Some(terms) = terms {
                            let slot = ratios.entry(name.clone()).or_default();
                            match tightness_ratio(&report, terms) {
                                Some(r) => slot.1.push(r),
                                None => slot.0 += 1,
                            }
                        }
                        if report.is_violation() {
                            entry.fail += 1;
                            failures.push(describe(Some(report), None));
                        } else {
                            entry.pass += 1;
                        }
                    }
                }
            }
        }
    }

    let slack_stats = slacks
        .into_iter()
        .map(|((theorem, slack_index), mut values)| {
            let (min, p50, max) = order_stats(&mut values);
            SlackStats {
                theorem,
                slack_index,
                min,
                p50,
                max,
                n: values.len(),
            }
        })
        .collect();
    let tightness = ratios
        .into_iter()
        .map(|(name, (degenerate, mut values))| {
            let stats = (!values.is_empty()).then(|| order_stats(&mut values));
            (
                name,
                RatioSummary {
                    n: values.len(),
                    degenerate,
                    min: stats.map(|s| s.0),
                    p50: stats.map(|s| s.1),
                    max: stats.map(|s| s.2),
                },
            )
        })
        .collect();

    Ok(CampaignResult {
        config: cfg.clone(),
        totals,
        slack_stats,
        tightness,
        failures,
        wall_time: start.elapsed(),
    })
}

/// Regenerates the failing case from its descriptor and re-evaluates the chain.
/// Returns the report matching the descriptor's vertex index.
pub fn replay_failure(desc: &FailureDescriptor) -> Result<ChainReport, HarnessError> {
    let registry = ChainRegistry::builtin();
    let case = TrialCase::generate(desc.dimension, desc.seed, &desc.context);
    let mut truths = case.truths(desc.context.mc_samples);
    let reports = registry
        .evaluate(&desc.theorem, &case.inputs, &mut truths)
        .map_err(|e| HarnessError::Replay(e.to_string()))?;
    let index = desc.report.as_ref().and_then(|r| r.index);
    reports
        .into_iter()
        .find(|r| r.index == index)
        .ok_or_else(|| HarnessError::Replay("no report with the recorded index".into()))
}

/// Convenience for tests and tools: the case a campaign would build for `trial`.
pub fn trial_case(cfg: &CampaignConfig, trial: usize) -> TrialCase {
    let dimension = cfg.dimensions[trial % cfg.dimensions.len()];
    TrialCase::generate(dimension, child_seed(cfg.master_seed, trial as u64), &cfg.trial_context())
}
