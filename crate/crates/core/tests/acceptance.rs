//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Runs the bundled default campaign twice (criteria 3, 5 and 8), so expect
//! several minutes on a single core.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hh_core::bounds::{choquet_chain, cor3_threshold, thm2_centroid_bound, thm2_upper, thm3_chain};
use hh_core::functions::{random_convex, FunctionKind};
use hh_core::harness::{random_simplex, run_campaign, search_cor3_counterexample, CampaignConfig, CampaignResult};
use hh_core::quadrature::integrate_exact;
use hh_core::{ConvexFunction, Simplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn dirichlet(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

fn default_config() -> CampaignConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default_campaign.json");
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    CampaignConfig::from_json(&text).expect("bundled config is valid")
}

fn interval_hh() -> Outcome {
    let s = Simplex::interval(0.0, 1.0).unwrap();
    let f = ConvexFunction::squared_norm(1);
    let run = || {
        let gt = integrate_exact(&f, &s).unwrap();
        choquet_chain(&f, &s, &gt).unwrap()
    };
    let report = run();
    let mut best = Duration::MAX;
    for _ in 0..100 {
        let start = Instant::now();
        std::hint::black_box(run());
        best = best.min(start.elapsed());
    }
    let v = report.values();
    let values_ok = close(v[0], 0.25, 1e-12) && close(v[1], 1.0 / 3.0, 1e-12) && close(v[2], 0.5, 1e-12);
    outcome(
        values_ok && best < Duration::from_millis(1),
        format!("terms {v:?}, fastest of 100 runs {best:?}"),
    )
}

fn triangle_centroid_refinement() -> Outcome {
    let s = Simplex::standard(2).unwrap();
    let f = ConvexFunction::squared_norm(2);
    let gt = integrate_exact(&f, &s).unwrap();
    let r = thm2_upper(&f, &s, &s.centroid(), &gt).unwrap();
    let v = r.values();
    let ok = close(v[0], 1.0 / 3.0, 1e-12)
        && close(v[1], 14.0 / 27.0, 1e-12)
        && close(v[2], 2.0 / 3.0, 1e-12)
        && v[0] < v[1]
        && v[1] < v[2];
    outcome(ok, format!("chain {v:?}"))
}

fn full_suite(result: &CampaignResult) -> Outcome {
    let total: usize = result.totals.values().map(|t| t.pass + t.fail).sum();
    let secs = result.wall_time.as_secs_f64();
    outcome(
        result.all_passed() && secs < 600.0,
        format!(
            "{} trials x {} chains, {total} reports, {} failures, {secs:.1} s",
            result.config.trials_per_theorem,
            result.config.theorems.len(),
            result.failure_count()
        ),
    )
}

fn affine_equality() -> Outcome {
    let cfg = CampaignConfig {
        trials_per_theorem: 1000,
        kinds: vec![FunctionKind::Affine],
        ..default_config()
    };
    let result = run_campaign(&cfg).unwrap();
    let worst = result
        .slack_stats
        .iter()
        .map(|s| s.min.abs().max(s.max.abs()))
        .fold(0.0, f64::max);
    outcome(
        result.all_passed() && worst <= 1e-8,
        format!("{} chains, max |slack| {worst:e}", result.totals.len()),
    )
}

fn refinement_dominance(result: &CampaignResult) -> Outcome {
    // Slack 1 of thm2 is classical - refined; slack 1 of thm5 is the thm4 bound - refined.
    let min_of = |name: &str| result.stats(name).find(|s| s.slack_index == 1).map(|s| (s.min, s.n));
    match (min_of("thm2"), min_of("thm5")) {
        (Some((m2, n2)), Some((m5, n5))) => outcome(
            m2 >= -1e-8 && m5 >= -1e-8,
            format!("thm2 min margin {m2:e} over {n2} trials, thm5 min margin {m5:e} over {n5} trials"),
        ),
        _ => outcome(false, "campaign did not run thm2 and thm5"),
    }
}

fn necessity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = f64::NEG_INFINITY;
    let mut max_evals = 0;
    let mut found = 0;
    for k in 0..20 {
        let p = rng.random_range(0.1..3.0);
        let q = rng.random_range(0.1..3.0);
        let a: f64 = rng.random_range(-2.0..2.0);
        let b = a + rng.random_range(0.2..3.0);
        let threshold = cor3_threshold(p, q, a, b);
        let y = threshold + (0.05 + 0.01 * k as f64) * (b - a);
        if let Ok(Some(w)) = search_cor3_counterexample(p, q, a, b, y, 10_000, k) {
            let slack = w.report.min_slack();
            if slack < -1e-6 && w.evaluations <= 10_000 {
                found += 1;
            }
            worst = worst.max(slack);
            max_evals = max_evals.max(w.evaluations);
        }
    }
    outcome(
        found == 20,
        format!("{found}/20 witnesses, least negative slack {worst:e}, at most {max_evals} evaluations"),
    )
}

fn cross_method_geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_agree, mut worst_partition) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let dim = 1 + i % 8;
        let s = random_simplex(dim, &mut rng);
        let x = s.combine(&dirichlet(&mut rng, dim + 1));
        let a = s.barycentric_solve(&x).unwrap();
        let b = s.barycentric_volumes(&x).unwrap();
        worst_agree = worst_agree.max(a.max_abs_diff(&b));
        let total: f64 = (0..=dim).map(|k| s.replace_vertex(k, &x).map_or(0.0, |f| f.volume())).sum();
        worst_partition = worst_partition.max((total - s.volume()).abs() / s.volume());
    }
    outcome(
        worst_agree <= 1e-9 && worst_partition <= 1e-10,
        format!("max weight difference {worst_agree:e}, max relative partition error {worst_partition:e}"),
    )
}

fn determinism(first: &CampaignResult, cfg: &CampaignConfig) -> Outcome {
    let second = run_campaign(cfg).unwrap();
    let (a, b) = (first.to_json(), second.to_json());
    outcome(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut worst3, mut worst2) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let dim = 1 + i % 8;
        let s = random_simplex(dim, &mut rng);
        let kind = FunctionKind::ALL[i % FunctionKind::ALL.len()];
        let f = random_convex(dim, kind, rng.random());
        let gt = hh_core::quadrature::ground_truth(&f, &s, 1000, 0).unwrap();
        let classic = choquet_chain(&f, &s, &gt).unwrap().values();
        for j in 0..=dim {
            let v = thm3_chain(&f, &s, &s, j, &gt).unwrap().values();
            worst3 = worst3.max((v[0] - classic[0]).abs()).max((v[4] - classic[2]).abs());
        }
        let refined = thm2_upper(&f, &s, &s.centroid(), &gt).unwrap().values()[1];
        worst2 = worst2.max((refined - thm2_centroid_bound(&f, &s)).abs());
    }
    outcome(
        worst3 <= 1e-12 && worst2 <= 1e-12,
        format!("outer-term difference {worst3:e}, centroid closed-form difference {worst2:e}"),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let cfg = default_config();
    eprintln!("running the default campaign twice; this takes a few minutes");
    let first = run_campaign(&cfg).unwrap();

    let criteria: Vec<Criterion> = vec![
        ("1 interval Hermite-Hadamard", Box::new(interval_hh)),
        ("2 centroid refinement on the triangle", Box::new(triangle_centroid_refinement)),
        ("3 full randomized suite", Box::new(|| full_suite(&first))),
        ("4 affine equality", Box::new(affine_equality)),
        ("5 refinement dominance", Box::new(|| refinement_dominance(&first))),
        ("6 weighted-window necessity", Box::new(necessity)),
        ("7 cross-method geometry", Box::new(cross_method_geometry)),
        ("8 determinism", Box::new(|| determinism(&first, &cfg))),
        ("9 degeneration identities", Box::new(degeneration)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let o = check();
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
