//! Hermite–Hadamard inequality chains on simplices.
//!
//! Each operation evaluates every term of one chain and packages them in a
//! [`ChainReport`]. Terms are listed in ascending order, so every consecutive
//! difference (`slack`) is nonnegative when the inequality holds. Ground truth
//! integrals are passed in rather than computed here, which lets a caller share
//! one estimate between several chains on the same `(f, Δ)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::ScalarField;
use crate::quadrature::IntegralEstimate;
use crate::simplex::{GeometryError, Point, Simplex};
use crate::tolerance::{chain_tolerance, TOL_GEOM};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BoundsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("dimension mismatch: function has dimension {function}, simplex has {simplex}")]
    DimensionMismatch { function: usize, simplex: usize },
    #[error("point lies outside the simplex (min barycentric weight {min_weight:e})")]
    PointOutsideSimplex { min_weight: f64 },
    #[error("subsimplex centroid is {distance:e} away from the parent centroid")]
    BarycenterMismatch { distance: f64 },
    #[error("subsimplex escapes its parent (min vertex weight {min_weight:e})")]
    SubsimplexEscapesParent { min_weight: f64 },
    #[error("convex combination misses the centroid by {distance:e}")]
    CentroidConstraintViolated { distance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain: String,
    pub terms: Vec<Term>,
    pub slacks: Vec<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub ground_truth: Option<IntegralEstimate>,
    /// One-based vertex index for chains parameterized by a vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    /// Whether the chain's hypothesis holds; the inequality is only asserted when it does.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_holds: Option<bool>,
}

impl ChainReport {
    pub fn new(chain: &str, terms: Vec<(&str, f64)>, ground_truth: Option<IntegralEstimate>) -> Self {
        let tolerance = chain_tolerance(ground_truth.as_ref().map_or(0.0, |g| g.std_error));
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(label, value)| Term {
                label: label.to_string(),
                value,
            })
            .collect();
        let slacks = terms.windows(2).map(|w| w[1].value - w[0].value).collect();
        let mut report = ChainReport {
            chain: chain.to_string(),
            terms,
            slacks,
            tolerance,
            verdict: Verdict::Pass,
            ground_truth,
            index: None,
            condition_holds: None,
        };
        report.verdict = report.judge();
        report
    }

    fn judge(&self) -> Verdict {
        if self.slacks.iter().all(|&s| s >= -self.tolerance) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Re-judges with `max(floor, 4·std_error)` as the tolerance.
    pub fn with_tolerance_floor(mut self, floor: f64) -> Self {
        let se = self.ground_truth.as_ref().map_or(0.0, |g| g.std_error);
        self.tolerance = floor.max(crate::tolerance::MC_SIGMA * se);
        self.verdict = self.judge();
        self
    }

    fn with_index(mut self, index: usize) -> Self {
        self.index = Some(index);
        self
    }

    /// A failing verdict whose hypothesis holds.
    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Fail && self.condition_holds != Some(false)
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.label == label).map(|t| t.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_dims<F: ScalarField + ?Sized>(f: &F, s: &Simplex) -> Result<(), BoundsError> {
    if f.dim() != s.dim() {
        return Err(BoundsError::DimensionMismatch {
            function: f.dim(),
            simplex: s.dim(),
        });
    }
    Ok(())
}

fn vertex_values<F: ScalarField + ?Sized>(f: &F, s: &Simplex) -> Vec<f64> {
    s.vertices().iter().map(|v| f.value(v.coords())).collect()
}

fn vertex_average<F: ScalarField + ?Sized>(f: &F, s: &Simplex) -> f64 {
    vertex_values(f, s).iter().sum::<f64>() / s.vertex_count() as f64
}

fn require_inside(s: &Simplex, p: &Point) -> Result<Vec<f64>, BoundsError> {
    let lambda = s.barycentric_solve(p)?;
    if !lambda.is_convex() {
        return Err(BoundsError::PointOutsideSimplex {
            min_weight: lambda.min_weight(),
        });
    }
    Ok(lambda.weights().to_vec())
}

/// Barycentric weights of every vertex of `sub` relative to `s`.
fn sub_weights(s: &Simplex, sub: &Simplex) -> Result<Vec<Vec<f64>>, BoundsError> {
    if sub.dim() != s.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: s.dim(),
            actual: sub.dim(),
        }
        .into());
    }
    sub.vertices()
        .iter()
        .map(|v| {
            let lambda = s.barycentric_solve(v)?;
            if !lambda.is_convex() {
                return Err(BoundsError::SubsimplexEscapesParent {
                    min_weight: lambda.min_weight(),
                });
            }
            Ok(lambda.weights().to_vec())
        })
        .collect()
}

/// `f(centroid) <= mean <= Σ λ_k(centroid) f(P_k)` for the normalized Lebesgue measure.
pub fn choquet_chain<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    gt: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    check_dims(f, s)?;
    let c = s.centroid();
    Ok(ChainReport::new(
        "choquet",
        vec![
            ("f(centroid)", f.value(c.coords())),
            ("mean", gt.mean_value),
            ("vertex_average", vertex_average(f, s)),
        ],
        Some(gt.clone()),
    ))
}

/// `(1/(n+1)) (Σ_k (1 - λ_k(p)) f(P_k) + f(p))`.
pub fn thm2_bound<F: ScalarField + ?Sized>(f: &F, s: &Simplex, p: &Point) -> Result<f64, BoundsError> {
    check_dims(f, s)?;
    let lambda = require_inside(s, p)?;
    let m = s.vertex_count() as f64;
    let weighted: f64 = vertex_values(f, s)
        .iter()
        .zip(&lambda)
        .map(|(fv, l)| (1.0 - l) * fv)
        .sum();
    Ok((weighted + f.value(p.coords())) / m)
}

/// The centroid specialization `(1/(n+1)) ((n/(n+1)) Σ f(P_k) + f(centroid))`.
pub fn thm2_centroid_bound<F: ScalarField + ?Sized>(f: &F, s: &Simplex) -> f64 {
    let m = s.vertex_count() as f64;
    let n = s.dim() as f64;
    let total: f64 = vertex_values(f, s).iter().sum();
    ((n / m) * total + f.value(s.centroid().coords())) / m
}

/// `mean <= (1/(n+1)) (Σ_k (1 - λ_k(p)) f(P_k) + f(p)) <= (1/(n+1)) Σ f(P_k)` for any `p ∈ Δ`.
pub fn thm2_upper<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    p: &Point,
    gt: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    let refined = thm2_bound(f, s, p)?;
    Ok(ChainReport::new(
        "thm2",
        vec![
            ("mean", gt.mean_value),
            ("refined_upper", refined),
            ("vertex_average", vertex_average(f, s)),
        ],
        Some(gt.clone()),
    ))
}

/// Two-sided refinement for a subsimplex `sub` sharing the centroid of `s`,
/// at vertex `j` (zero-based) of `sub`.
///
/// * lower: `Σ_i λ_i(P'_j) f((1/(n+1))(Σ_{k≠i} P_k + P'_j))`
/// * upper: `(1/(n+1)) (Σ_{k≠j} Σ_i λ_i(P'_k) f(P_i) + f(P'_j))`
pub fn thm3_chain<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    sub: &Simplex,
    j: usize,
    gt: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    check_dims(f, s)?;
    let m = s.vertex_count();
    if j >= m {
        return Err(GeometryError::IndexOutOfRange { index: j, count: m }.into());
    }
    let lambdas = sub_weights(s, sub)?;
    let c = s.centroid();
    let distance = sub.centroid().max_abs_diff(&c);
    if distance > TOL_GEOM {
        return Err(BoundsError::BarycenterMismatch { distance });
    }
    let inv = 1.0 / m as f64;
    let fv = vertex_values(f, s);
    let pj = sub.vertex(j).coords();
    let total: Vec<f64> = (0..s.dim())
        .map(|d| s.vertices().iter().map(|v| v.coords()[d]).sum())
        .collect();

    let mut lower = 0.0;
    let mut arg = vec![0.0; s.dim()];
    for (i, pi) in s.vertices().iter().enumerate() {
        for d in 0..s.dim() {
            arg[d] = inv * (total[d] - pi.coords()[d] + pj[d]);
        }
        lower += lambdas[j][i] * f.value(&arg);
    }

    let mut upper: f64 = (0..m)
        .filter(|&k| k != j)
        .map(|k| lambdas[k].iter().zip(&fv).map(|(l, v)| l * v).sum::<f64>())
        .sum();
    upper = inv * (upper + f.value(pj));

    Ok(ChainReport::new(
        "thm3",
        vec![
            ("f(centroid)", f.value(c.coords())),
            ("refined_lower", lower),
            ("mean", gt.mean_value),
            ("refined_upper", upper),
            ("vertex_average", fv.iter().sum::<f64>() * inv),
        ],
        Some(gt.clone()),
    )
    .with_index(j + 1))
}

fn sub_center(s: &Simplex, sub: &Simplex) -> Result<(Point, Vec<f64>), BoundsError> {
    sub_weights(s, sub)?;
    let p = sub.centroid();
    let lambda = require_inside(s, &p)?;
    Ok((p, lambda))
}

/// `f(P) <= mean over sub <= Σ_j λ_j(P) f(P_j)` with `P` the centroid of `sub`.
pub fn thm4_chain<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    sub: &Simplex,
    gt_sub: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    check_dims(f, s)?;
    let (p, lambda) = sub_center(s, sub)?;
    let weighted: f64 = vertex_values(f, s).iter().zip(&lambda).map(|(v, l)| v * l).sum();
    Ok(ChainReport::new(
        "thm4",
        vec![
            ("f(P)", f.value(p.coords())),
            ("mean_sub", gt_sub.mean_value),
            ("vertex_weighted", weighted),
        ],
        Some(gt_sub.clone()),
    ))
}

/// `mean over sub <= (1/(n+1)) (n Σ_j λ_j(P) f(P_j) + f(P)) <= Σ_j λ_j(P) f(P_j)`.
pub fn thm5_upper<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    sub: &Simplex,
    gt_sub: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    check_dims(f, s)?;
    let (p, lambda) = sub_center(s, sub)?;
    let weighted: f64 = vertex_values(f, s).iter().zip(&lambda).map(|(v, l)| v * l).sum();
    let m = s.vertex_count() as f64;
    let refined = (s.dim() as f64 * weighted + f.value(p.coords())) / m;
    Ok(ChainReport::new(
        "thm5",
        vec![
            ("mean_sub", gt_sub.mean_value),
            ("refined_upper", refined),
            ("vertex_weighted", weighted),
        ],
        Some(gt_sub.clone()),
    ))
}

/// `f(centroid) <= Σ β_j f(M_j) <= (1/(n+1)) Σ f(P_i)` whenever `Σ β_j M_j` is the centroid.
pub fn thm6_chain<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    points: &[Point],
    betas: &[f64],
) -> Result<ChainReport, BoundsError> {
    check_dims(f, s)?;
    if points.is_empty() || points.len() != betas.len() {
        return Err(BoundsError::InvalidParameter(format!(
            "need matching nonempty points and weights, got {} and {}",
            points.len(),
            betas.len()
        )));
    }
    if let Some(b) = betas.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
        return Err(BoundsError::InvalidParameter(format!("weights must be nonnegative, got {b}")));
    }
    let total: f64 = betas.iter().sum();
    if (total - 1.0).abs() > TOL_GEOM {
        return Err(BoundsError::InvalidParameter(format!("weights sum to {total}, not 1")));
    }
    for p in points {
        require_inside(s, p)?;
    }
    let c = s.centroid();
    let mut mix = vec![0.0; s.dim()];
    for (p, b) in points.iter().zip(betas) {
        for (m, x) in mix.iter_mut().zip(p.coords()) {
            *m += b * x;
        }
    }
    let distance = mix
        .iter()
        .zip(c.coords())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if distance > TOL_GEOM {
        return Err(BoundsError::CentroidConstraintViolated { distance });
    }
    let weighted: f64 = points.iter().zip(betas).map(|(p, b)| b * f.value(p.coords())).sum();
    Ok(ChainReport::new(
        "thm6",
        vec![
            ("f(centroid)", f.value(c.coords())),
            ("beta_weighted", weighted),
            ("vertex_average", vertex_average(f, s)),
        ],
        None,
    ))
}

fn check_interval<F: ScalarField + ?Sized>(f: &F, a: f64, b: f64) -> Result<(), BoundsError> {
    if f.dim() != 1 {
        return Err(BoundsError::DimensionMismatch {
            function: f.dim(),
            simplex: 1,
        });
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(BoundsError::InvalidParameter(format!("need a < b, got [{a}, {b}]")));
    }
    Ok(())
}

/// The interval chain for `λ ∈ [0, 1]`:
///
/// ```text
/// f((a+b)/2) <= λ f((a + u)/2) + (1-λ) f((b + u)/2) <= mean
///            <= ((1-λ) f(a) + λ f(b) + f(v)) / 2 <= (f(a) + f(b)) / 2
/// ```
///
/// with `u = (1-λ)a + λb` and `v = λa + (1-λ)b`, the endpoints of the
/// subinterval with the same midpoint as `[a, b]`.
pub fn cor2_chain<F: ScalarField + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    lambda: f64,
    gt: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    check_interval(f, a, b)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(BoundsError::InvalidParameter(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let g = |x: f64| f.value(&[x]);
    let u = (1.0 - lambda) * a + lambda * b;
    let v = lambda * a + (1.0 - lambda) * b;
    let lower = lambda * g((a + u) / 2.0) + (1.0 - lambda) * g((b + u) / 2.0);
    let upper = ((1.0 - lambda) * g(a) + lambda * g(b) + g(v)) / 2.0;
    Ok(ChainReport::new(
        "cor2",
        vec![
            ("f(midpoint)", g((a + b) / 2.0)),
            ("refined_lower", lower),
            ("mean", gt.mean_value),
            ("refined_upper", upper),
            ("endpoint_average", (g(a) + g(b)) / 2.0),
        ],
        Some(gt.clone()),
    ))
}

/// `(b - a) · min(p, q) / (p + q)`: the largest half-width for which the
/// weighted interval chain holds for every convex function.
pub fn cor3_threshold(p: f64, q: f64, a: f64, b: f64) -> f64 {
    (b - a) * p.min(q) / (p + q)
}

/// Center `A = (pa + qb)/(p + q)` and the window `[A - y, A + y]`.
pub fn cor3_window(p: f64, q: f64, a: f64, b: f64, y: f64) -> (f64, f64, f64) {
    let center = (p * a + q * b) / (p + q);
    (center, center - y, center + y)
}

fn check_cor3(p: f64, q: f64, a: f64, b: f64, y: f64) -> Result<(), BoundsError> {
    if !(p > 0.0 && q > 0.0 && y > 0.0) || !(p.is_finite() && q.is_finite() && y.is_finite()) {
        return Err(BoundsError::InvalidParameter(format!(
            "p, q and y must be positive, got p={p}, q={q}, y={y}"
        )));
    }
    if !(a < b) {
        return Err(BoundsError::InvalidParameter(format!("need a < b, got [{a}, {b}]")));
    }
    Ok(())
}

/// `f(A) <= (1/2y) ∫_{A-y}^{A+y} f <= (p f(a) + q f(b))/(p + q)`.
///
/// `gt` must be the mean over the window. The report records whether
/// `y <= (b - a) min(p, q)/(p + q)`; only then is the chain asserted.
#[allow(clippy::too_many_arguments)]
pub fn cor3_check<F: ScalarField + ?Sized>(
    p: f64,
    q: f64,
    a: f64,
    b: f64,
    y: f64,
    f: &F,
    gt: &IntegralEstimate,
) -> Result<ChainReport, BoundsError> {
    check_interval(f, a, b)?;
    check_cor3(p, q, a, b, y)?;
    let g = |x: f64| f.value(&[x]);
    let (center, _, _) = cor3_window(p, q, a, b, y);
    let mut report = ChainReport::new(
        "cor3",
        vec![
            ("f(A)", g(center)),
            ("mean_window", gt.mean_value),
            ("weighted_endpoints", (p * g(a) + q * g(b)) / (p + q)),
        ],
        Some(gt.clone()),
    );
    report.condition_holds = Some(y <= cor3_threshold(p, q, a, b));
    Ok(report)
}
