//! Ground-truth integral means `(1/Vol Δ) ∫_Δ f` over simplices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::{ConvexFunction, FunctionKind, FunctionSpec, ScalarField};
use crate::simplex::{Point, Simplex};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("no closed-form mean for {0} functions")]
    UnsupportedKind(FunctionKind),
    #[error("dimension mismatch: function has dimension {function}, simplex has {simplex}")]
    DimensionMismatch { function: usize, simplex: usize },
    #[error("Monte Carlo integration needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationMethod {
    MonteCarlo,
    ExactPolynomial,
    /// Closed form for one-dimensional hinges.
    ExactPiecewiseLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub mean_value: f64,
    pub std_error: f64,
    pub method: IntegrationMethod,
    pub samples: usize,
}

impl IntegralEstimate {
    pub fn exact(mean_value: f64, method: IntegrationMethod) -> Self {
        IntegralEstimate {
            mean_value,
            std_error: 0.0,
            method,
            samples: 0,
        }
    }
}

/// Seeded stream of uniform points in a simplex.
///
/// Each point is `Σ w_k P_k` with `w_k = E_k / Σ E` for i.i.d. standard
/// exponentials `E_k`, which is the flat Dirichlet distribution.
pub struct UniformSampler<'a> {
    simplex: &'a Simplex,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl<'a> UniformSampler<'a> {
    pub fn new(simplex: &'a Simplex, seed: u64) -> Self {
        UniformSampler {
            simplex,
            rng: ChaCha8Rng::seed_from_u64(seed),
            weights: vec![0.0; simplex.vertex_count()],
        }
    }

    /// Draws flat-Dirichlet weights into the internal buffer.
    pub fn next_weights(&mut self) -> &[f64] {
        let mut total = 0.0;
        for w in self.weights.iter_mut() {
            let e: f64 = self.rng.sample(Exp1);
            *w = e;
            total += e;
        }
        for w in self.weights.iter_mut() {
            *w /= total;
        }
        &self.weights
    }

    pub fn next_into(&mut self, out: &mut [f64]) {
        self.next_weights();
        self.simplex.combine_into(&self.weights, out);
    }

    pub fn next_point(&mut self) -> Point {
        self.next_weights();
        self.simplex.combine(&self.weights)
    }
}

pub fn sample_uniform(s: &Simplex, count: usize, seed: u64) -> Vec<Point> {
    let mut sampler = UniformSampler::new(s, seed);
    (0..count).map(|_| sampler.next_point()).collect()
}

/// Sample mean of `f` over `count` uniform points, with standard error
/// `sd / √count` (Welford accumulation, so constants give zero error).
pub fn integrate_mc<F: ScalarField + ?Sized>(
    f: &F,
    s: &Simplex,
    count: usize,
    seed: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    if f.dim() != s.dim() {
        return Err(QuadratureError::DimensionMismatch {
            function: f.dim(),
            simplex: s.dim(),
        });
    }
    if count < 2 {
        return Err(QuadratureError::TooFewSamples(count));
    }
    let mut sampler = UniformSampler::new(s, seed);
    let mut x = vec![0.0; s.dim()];
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=count {
        sampler.next_into(&mut x);
        let v = f.value(&x);
        let delta = v - mean;
        mean += delta / k as f64;
        m2 += delta * (v - mean);
    }
    let variance = m2 / (count - 1) as f64;
    Ok(IntegralEstimate {
        mean_value: mean,
        std_error: (variance.max(0.0) / count as f64).sqrt(),
        method: IntegrationMethod::MonteCarlo,
        samples: count,
    })
}

/// Second barycentric moment `∫ λ_i λ_j dx / Vol = (1 + δ_ij) / ((n+1)(n+2))`.
pub fn second_moment(n: usize, i: usize, j: usize) -> f64 {
    let delta = if i == j { 1.0 } else { 0.0 };
    (1.0 + delta) / ((n + 1) as f64 * (n + 2) as f64)
}

/// Closed-form mean for Affine and QuadraticPSD functions.
pub fn integrate_exact(f: &ConvexFunction, s: &Simplex) -> Result<IntegralEstimate, QuadratureError> {
    if f.dim() != s.dim() {
        return Err(QuadratureError::DimensionMismatch {
            function: f.dim(),
            simplex: s.dim(),
        });
    }
    let c = s.centroid();
    let mean = match f.spec() {
        FunctionSpec::Affine(p) => p.at(c.coords()),
        FunctionSpec::QuadraticPSD { matrix, linear, constant } => {
            let n = s.dim();
            let verts = s.vertices();
            // Q P_l for every vertex once.
            let q_times: Vec<Vec<f64>> = verts
                .iter()
                .map(|v| matrix.iter().map(|row| dot(row, v.coords())).collect())
                .collect();
            let mut quad = 0.0;
            for (k, pk) in verts.iter().enumerate() {
                for (l, qpl) in q_times.iter().enumerate() {
                    quad += second_moment(n, k, l) * dot(pk.coords(), qpl);
                }
            }
            quad + dot(linear, c.coords()) + constant
        }
        _ => return Err(QuadratureError::UnsupportedKind(f.kind())),
    };
    Ok(IntegralEstimate::exact(mean, IntegrationMethod::ExactPolynomial))
}

/// Mean of a one-dimensional hinge `max(0, w x - c)` over `[lo, hi]`.
pub fn integrate_hinge_1d(f: &ConvexFunction, lo: f64, hi: f64) -> Result<IntegralEstimate, QuadratureError> {
    let FunctionSpec::HingeDistance { normal, threshold } = f.spec() else {
        return Err(QuadratureError::UnsupportedKind(f.kind()));
    };
    if normal.len() != 1 {
        return Err(QuadratureError::DimensionMismatch {
            function: normal.len(),
            simplex: 1,
        });
    }
    if !(lo < hi) {
        return Err(QuadratureError::InvalidInterval { lo, hi });
    }
    let w = normal[0];
    let g = |x: f64| w * x - threshold;
    let mean = if w == 0.0 {
        (-threshold).max(0.0)
    } else {
        // Active part of the interval, where w x >= c.
        let kink = threshold / w;
        let (a, b) = if w > 0.0 {
            (kink.max(lo), hi)
        } else {
            (lo, kink.min(hi))
        };
        if a >= b {
            0.0
        } else {
            0.5 * (g(a) + g(b)) * (b - a) / (hi - lo)
        }
    };
    Ok(IntegralEstimate::exact(mean, IntegrationMethod::ExactPiecewiseLinear))
}

/// Exact mean when one is available (polynomials, hinges on intervals),
/// otherwise Monte Carlo with `mc_samples`.
pub fn ground_truth(
    f: &ConvexFunction,
    s: &Simplex,
    mc_samples: usize,
    seed: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    if f.kind().is_polynomial() {
        integrate_exact(f, s)
    } else if f.kind() == FunctionKind::HingeDistance && s.dim() == 1 {
        let (u, v) = (s.vertex(0).coords()[0], s.vertex(1).coords()[0]);
        integrate_hinge_1d(f, u.min(v), u.max(v))
    } else {
        integrate_mc(f, s, mc_samples, seed)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}
