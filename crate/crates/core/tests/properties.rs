use hh_core::bounds::{choquet_chain, thm2_bound, thm2_centroid_bound, thm3_chain, thm4_chain, thm5_upper, Verdict};
use hh_core::functions::{random_convex, FunctionKind, FunctionSpec, ScalarField};
use hh_core::harness::{random_simplex, replay_failure, run_campaign, CampaignConfig};
use hh_core::quadrature::{integrate_exact, integrate_mc, sample_uniform, IntegralEstimate};
use hh_core::{ConvexFunction, Point, Simplex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

fn dirichlet(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

fn setup(dim: usize, seed: u64) -> (Simplex, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_simplex(dim, &mut rng);
    (s, rng)
}

fn kind_strategy() -> impl Strategy<Value = FunctionKind> {
    proptest::sample::select(FunctionKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_and_volume_ratios_agree(dim in 1usize..=8, seed in any::<u64>()) {
        let (s, mut rng) = setup(dim, seed);
        let x = s.combine(&dirichlet(&mut rng, dim + 1));
        let a = s.barycentric_solve(&x).unwrap();
        let b = s.barycentric_volumes(&x).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-9, "{a:?} vs {b:?}");
        let total: f64 = (0..=dim).map(|i| s.replace_vertex(i, &x).map_or(0.0, |f| f.volume())).sum();
        prop_assert!((total - s.volume()).abs() <= 1e-10 * s.volume());
    }

    #[test]
    fn barycentric_coordinates_are_affine(dim in 1usize..=8, seed in any::<u64>(), alpha in 0.0f64..=1.0) {
        let (s, mut rng) = setup(dim, seed);
        let x = s.combine(&dirichlet(&mut rng, dim + 1));
        let y = s.combine(&dirichlet(&mut rng, dim + 1));
        let z = Point::new(x.coords().iter().zip(y.coords()).map(|(a, b)| alpha * a + (1.0 - alpha) * b).collect()).unwrap();
        let (lx, ly, lz) = (s.barycentric_solve(&x).unwrap(), s.barycentric_solve(&y).unwrap(), s.barycentric_solve(&z).unwrap());
        for k in 0..=dim {
            prop_assert!((lz[k] - (alpha * lx[k] + (1.0 - alpha) * ly[k])).abs() <= 1e-10);
        }
    }

    #[test]
    fn homothety_keeps_centroid(dim in 1usize..=8, seed in any::<u64>(), step in 1usize..=10) {
        let (s, _) = setup(dim, seed);
        let t = step as f64 / 10.0;
        let h = s.homothety_about_centroid(t).unwrap();
        prop_assert!(h.centroid().max_abs_diff(&s.centroid()) <= 1e-12);
    }

    #[test]
    fn centered_subsimplex_stays_inside(dim in 1usize..=8, seed in any::<u64>(), frac in 0.01f64..=1.0) {
        let (s, mut rng) = setup(dim, seed);
        let p = s.combine(&dirichlet(&mut rng, dim + 1));
        let t = frac * s.centered_scale_limit(&p).unwrap();
        let sub = s.centered_subsimplex(&p, t).unwrap();
        prop_assert!(sub.vertices().iter().all(|v| s.contains(v)));
        prop_assert!(sub.centroid().max_abs_diff(&p) <= 1e-9);
    }

    #[test]
    fn escaping_subsimplex_is_rejected(dim in 1usize..=6, seed in any::<u64>()) {
        let (s, mut rng) = setup(dim, seed);
        let p = s.combine(&dirichlet(&mut rng, dim + 1));
        let limit = s.centered_scale_limit(&p).unwrap();
        prop_assume!(limit < 0.9);
        prop_assert!(s.centered_subsimplex(&p, limit * 1.1 + 1e-6).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jensen_at_vertices(dim in 1usize..=8, seed in any::<u64>(), kind in kind_strategy()) {
        let (s, mut rng) = setup(dim, seed);
        let f = random_convex(dim, kind, rng.random());
        let values: Vec<f64> = s.vertices().iter().map(|v| f.value(v.coords())).collect();
        for _ in 0..1000 {
            let w = dirichlet(&mut rng, dim + 1);
            let at = f.value(s.combine(&w).coords());
            let mix: f64 = w.iter().zip(&values).map(|(a, b)| a * b).sum();
            prop_assert!(at <= mix + 1e-8, "{kind}: {at} > {mix}");
        }
    }

    #[test]
    fn refined_bounds_dominate(dim in 1usize..=8, seed in any::<u64>(), kind in kind_strategy(), frac in 0.01f64..=1.0) {
        let (s, mut rng) = setup(dim, seed);
        let f = random_convex(dim, kind, rng.random()).with_kink_through(&s.combine(&dirichlet(&mut rng, dim + 1)));
        let p = s.combine(&dirichlet(&mut rng, dim + 1));
        let classical: f64 = s.vertices().iter().map(|v| f.value(v.coords())).sum::<f64>() / (dim + 1) as f64;
        prop_assert!(thm2_bound(&f, &s, &p).unwrap() <= classical + 1e-8);

        let sub = s.centered_subsimplex(&p, frac * s.centered_scale_limit(&p).unwrap()).unwrap();
        let dummy = IntegralEstimate::exact(0.0, hh_core::quadrature::IntegrationMethod::ExactPolynomial);
        let upper4 = thm4_chain(&f, &s, &sub, &dummy).unwrap().values()[2];
        let upper5 = thm5_upper(&f, &s, &sub, &dummy).unwrap();
        prop_assert!(upper5.values()[1] <= upper4 + 1e-8);
        prop_assert!(upper5.slacks[1] >= -1e-8);
    }

    #[test]
    fn degenerate_subsimplices_reduce_to_classical(dim in 1usize..=8, seed in any::<u64>(), kind in kind_strategy()) {
        let (s, mut rng) = setup(dim, seed);
        let f = random_convex(dim, kind, rng.random());
        let gt = IntegralEstimate::exact(0.0, hh_core::quadrature::IntegrationMethod::ExactPolynomial);
        let classic = choquet_chain(&f, &s, &gt).unwrap().values();
        for j in 0..=dim {
            let v = thm3_chain(&f, &s, &s, j, &gt).unwrap().values();
            prop_assert!((v[0] - classic[0]).abs() <= 1e-12 && (v[4] - classic[2]).abs() <= 1e-12);
            prop_assert!((v[3] - classic[2]).abs() <= 1e-12 * classic[2].abs().max(1.0));
        }
        let c = s.centroid();
        let at_centroid = thm2_bound(&f, &s, &c).unwrap();
        prop_assert!((at_centroid - thm2_centroid_bound(&f, &s)).abs() <= 1e-12 * at_centroid.abs().max(1.0));
    }
}

#[test]
fn exact_and_monte_carlo_agree_on_quadratics() {
    for trial in 0..100u64 {
        let dim = 1 + (trial as usize % 6);
        let (s, mut rng) = setup(dim, 1000 + trial);
        let f = random_convex(dim, FunctionKind::QuadraticPSD, rng.random());
        let exact = integrate_exact(&f, &s).unwrap().mean_value;
        let mc = integrate_mc(&f, &s, 1_000_000, rng.random()).unwrap();
        assert!(
            (mc.mean_value - exact).abs() <= 4.0 * mc.std_error,
            "dim {dim}: exact {exact}, mc {} ± {}",
            mc.mean_value,
            mc.std_error
        );
    }
}

#[test]
fn monte_carlo_closed_forms() {
    let unit = Simplex::interval(0.0, 1.0).unwrap();
    let est = integrate_mc(&ConvexFunction::squared_norm(1), &unit, 1_000_000, 11).unwrap();
    assert!((est.mean_value - 1.0 / 3.0).abs() <= 4.0 * est.std_error);
    let tri = Simplex::standard(2).unwrap();
    let est = integrate_mc(&ConvexFunction::squared_norm(2), &tri, 1_000_000, 12).unwrap();
    assert!((est.mean_value - 1.0 / 3.0).abs() <= 4.0 * est.std_error);
}

#[test]
fn exact_mean_is_linear() {
    for trial in 0..50u64 {
        let dim = 1 + (trial as usize % 6);
        let (s, mut rng) = setup(dim, 2000 + trial);
        let f = random_convex(dim, FunctionKind::QuadraticPSD, rng.random());
        let g = random_convex(dim, FunctionKind::QuadraticPSD, rng.random());
        let (alpha, beta) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
        let (FunctionSpec::QuadraticPSD { matrix: qf, linear: lf, constant: cf }, FunctionSpec::QuadraticPSD { matrix: qg, linear: lg, constant: cg }) = (f.spec(), g.spec()) else {
            unreachable!()
        };
        let matrix = qf
            .iter()
            .zip(qg)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect())
            .collect();
        let linear = lf.iter().zip(lg).map(|(x, y)| alpha * x + beta * y).collect();
        let h = ConvexFunction::new(FunctionSpec::QuadraticPSD { matrix, linear, constant: alpha * cf + beta * cg }, "mix").unwrap();
        let lhs = integrate_exact(&h, &s).unwrap().mean_value;
        let rhs = alpha * integrate_exact(&f, &s).unwrap().mean_value + beta * integrate_exact(&g, &s).unwrap().mean_value;
        assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }
}

#[test]
fn second_moments_match_sampling() {
    // E[λ_i λ_j] over the flat Dirichlet, checked coordinate-wise on the standard simplex.
    for dim in 1..=5 {
        let s = Simplex::standard(dim).unwrap();
        let pts = sample_uniform(&s, 400_000, dim as u64);
        for i in 0..dim {
            for j in 0..dim {
                let values: Vec<f64> = pts.iter().map(|p| p.coords()[i] * p.coords()[j]).collect();
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
                let se = (var / values.len() as f64).sqrt();
                let expected = hh_core::quadrature::second_moment(dim, i + 1, j + 1);
                assert!((mean - expected).abs() <= 4.0 * se, "dim {dim} ({i},{j}): {mean} vs {expected}");
            }
        }
    }
}

#[test]
fn sample_mean_is_centroid() {
    let (s, _) = setup(4, 77);
    let pts = sample_uniform(&s, 1_000_000, 5);
    let n = pts.len() as f64;
    for k in 0..4 {
        let xs: Vec<f64> = pts.iter().map(|p| p.coords()[k]).collect();
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((mean - s.centroid().coords()[k]).abs() <= 3.0 * (var / n).sqrt());
    }
}

#[test]
fn standard_error_scales_with_root_count() {
    let (s, mut rng) = setup(3, 99);
    let f = random_convex(3, FunctionKind::LogSumExp, rng.random());
    for seed in 0..50u64 {
        let small = integrate_mc(&f, &s, 10_000, seed).unwrap().std_error;
        let large = integrate_mc(&f, &s, 40_000, seed + 1000).unwrap().std_error;
        let ratio = small / large;
        assert!((ratio - 2.0).abs() <= 0.5, "seed {seed}: ratio {ratio}");
    }
}

#[test]
fn lower_slack_shrinks_with_subsimplex() {
    for seed in 0..50u64 {
        let dim = 1 + (seed as usize % 8);
        let (s, mut rng) = setup(dim, 3000 + seed);
        let f = random_convex(dim, FunctionKind::QuadraticPSD, rng.random());
        let p = s.combine(&dirichlet(&mut rng, dim + 1));
        let limit = s.centered_scale_limit(&p).unwrap();
        let slacks: Vec<f64> = [0.8, 0.4, 0.2, 0.1]
            .iter()
            .map(|t| {
                let sub = s.centered_subsimplex(&p, t * limit).unwrap();
                let gt = integrate_exact(&f, &sub).unwrap();
                thm4_chain(&f, &s, &sub, &gt).unwrap().slacks[0]
            })
            .collect();
        for w in slacks.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "seed {seed}: {slacks:?}");
        }
    }
}

#[test]
fn shrunk_subsimplex_mean_tends_to_center_value() {
    for (seed, kind) in [FunctionKind::QuadraticPSD, FunctionKind::ExpAffine, FunctionKind::LogSumExp].into_iter().enumerate() {
        let (s, mut rng) = setup(3, 4000 + seed as u64);
        let f = random_convex(3, kind, rng.random());
        let p = s.combine(&dirichlet(&mut rng, 4));
        let sub = s.centered_subsimplex(&p, 1e-3 * s.centered_scale_limit(&p).unwrap()).unwrap();
        let gt = hh_core::quadrature::ground_truth(&f, &sub, 10_000, 1).unwrap();
        let r = thm4_chain(&f, &s, &sub, &gt).unwrap();
        assert!(r.slacks[0].abs() < 1e-4, "{kind}: {:?}", r.slacks);
    }
}

#[test]
fn failures_replay_bit_for_bit() {
    // A zero tolerance turns rounding noise and Monte Carlo noise into failures.
    let cfg = CampaignConfig {
        trials_per_theorem: 40,
        mc_samples: 500,
        tolerance: 0.0,
        dimensions: vec![1, 2, 3],
        ..CampaignConfig::default()
    };
    let result = run_campaign(&cfg).unwrap();
    assert!(!result.failures.is_empty());
    for failure in &result.failures {
        let original = failure.report.as_ref().unwrap();
        let replay = replay_failure(failure).unwrap();
        assert_eq!(replay.verdict, Verdict::Fail);
        assert_eq!(replay.verdict, original.verdict);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&replay.slacks), bits(&original.slacks));
    }
}

#[test]
fn descriptors_round_trip_through_json() {
    let (s, mut rng) = setup(4, 5);
    assert_eq!(Simplex::from_json(&s.to_json()).unwrap(), s);
    for kind in FunctionKind::ALL {
        let f = random_convex(4, kind, rng.random());
        assert_eq!(ConvexFunction::from_json(&f.to_json()).unwrap(), f);
    }
}
