//! The convex test-function zoo.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::UniformSampler;
use crate::simplex::{Point, Simplex};
use crate::tolerance::TOL_CHAIN;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FunctionError {
    #[error("dimension mismatch: function has dimension {expected}, point has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("quadratic matrix is not symmetric positive semidefinite: {0}")]
    NotPsd(String),
    #[error("{kind} needs at least one {what}")]
    Empty { kind: FunctionKind, what: &'static str },
    #[error("invalid function parameters: {0}")]
    Invalid(String),
}

/// Anything that can be evaluated pointwise on `R^n`.
///
/// The bound chains accept any field so that non-convex inputs can be used to
/// exercise failing verdicts; the zoo in [`ConvexFunction`] only produces
/// convex ones.
pub trait ScalarField {
    fn dim(&self) -> usize;
    /// Unchecked evaluation; `x.len()` must equal [`ScalarField::dim`].
    fn value(&self, x: &[f64]) -> f64;
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionKind {
    Affine,
    QuadraticPSD,
    MaxOfAffines,
    ExpAffine,
    LogSumExp,
    HingeDistance,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 6] = [
        FunctionKind::Affine,
        FunctionKind::QuadraticPSD,
        FunctionKind::MaxOfAffines,
        FunctionKind::ExpAffine,
        FunctionKind::LogSumExp,
        FunctionKind::HingeDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Affine => "Affine",
            FunctionKind::QuadraticPSD => "QuadraticPSD",
            FunctionKind::MaxOfAffines => "MaxOfAffines",
            FunctionKind::ExpAffine => "ExpAffine",
            FunctionKind::LogSumExp => "LogSumExp",
            FunctionKind::HingeDistance => "HingeDistance",
        }
    }

    /// Kinds whose normalized integral has a closed form on any simplex.
    pub fn is_polynomial(self) -> bool {
        matches!(self, FunctionKind::Affine | FunctionKind::QuadraticPSD)
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FunctionKind {
    type Err = FunctionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FunctionError::Invalid(format!("unknown function kind {s:?}")))
    }
}

/// `slope · x + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePiece {
    pub slope: Vec<f64>,
    pub offset: f64,
}

impl AffinePiece {
    #[inline]
    pub fn at(&self, x: &[f64]) -> f64 {
        dot(&self.slope, x) + self.offset
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Kind-specific parameters, serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `slope · x + offset`
    Affine(AffinePiece),
    /// `xᵀ Q x + linear · x + constant` with `Q` symmetric PSD.
    QuadraticPSD {
        matrix: Vec<Vec<f64>>,
        linear: Vec<f64>,
        constant: f64,
    },
    /// `max_i (a_i · x + b_i)`
    MaxOfAffines { pieces: Vec<AffinePiece> },
    /// `exp(slope · x + offset)`
    ExpAffine(AffinePiece),
    /// `log Σ_i exp(a_i · x + b_i)`
    LogSumExp { terms: Vec<AffinePiece> },
    /// `max(0, normal · x - threshold)`
    HingeDistance { normal: Vec<f64>, threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FunctionDescriptor {
    #[serde(flatten)]
    spec: FunctionSpec,
    label: String,
}

/// A validated member of the zoo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionDescriptor", into = "FunctionDescriptor")]
pub struct ConvexFunction {
    spec: FunctionSpec,
    label: String,
    dim: usize,
}

impl TryFrom<FunctionDescriptor> for ConvexFunction {
    type Error = FunctionError;

    fn try_from(d: FunctionDescriptor) -> Result<Self, Self::Error> {
        ConvexFunction::new(d.spec, d.label)
    }
}

impl From<ConvexFunction> for FunctionDescriptor {
    fn from(f: ConvexFunction) -> Self {
        FunctionDescriptor {
            spec: f.spec,
            label: f.label,
        }
    }
}

fn check_pieces(kind: FunctionKind, pieces: &[AffinePiece], what: &'static str) -> Result<usize, FunctionError> {
    let first = pieces.first().ok_or(FunctionError::Empty { kind, what })?;
    let dim = first.slope.len();
    for p in pieces {
        if p.slope.len() != dim {
            return Err(FunctionError::Invalid(format!(
                "{kind} {what}s have inconsistent dimensions"
            )));
        }
        check_finite(&p.slope)?;
        check_finite(&[p.offset])?;
    }
    Ok(dim)
}

fn check_finite(values: &[f64]) -> Result<(), FunctionError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(FunctionError::Invalid("parameters must be finite".into()))
    }
}

/// Certifies that `q` is symmetric positive semidefinite by a pivot-tolerant
/// Cholesky factorization. Returns the lower factor on success.
#[allow(clippy::needless_range_loop)]
pub fn psd_certificate(q: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, FunctionError> {
    let n = q.len();
    if q.iter().any(|row| row.len() != n) {
        return Err(FunctionError::NotPsd("matrix is not square".into()));
    }
    let scale = q
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (q[i][j] - q[j][i]).abs() > 1e-12 * scale {
                return Err(FunctionError::NotPsd(format!("entries ({i},{j}) and ({j},{i}) differ")));
            }
        }
    }
    let tol = 1e-10 * scale;
    let mut l = vec![vec![0.0; n]; n];
    for k in 0..n {
        let d = q[k][k] - (0..k).map(|j| l[k][j] * l[k][j]).sum::<f64>();
        if d < -tol {
            return Err(FunctionError::NotPsd(format!("negative pivot {d:e} at {k}")));
        }
        if d <= tol {
            // Zero pivot: the rest of the column must vanish too.
            for i in k + 1..n {
                let r = q[i][k] - (0..k).map(|j| l[i][j] * l[k][j]).sum::<f64>();
                if r.abs() > tol.sqrt() * scale.sqrt() {
                    return Err(FunctionError::NotPsd(format!("zero pivot at {k} with nonzero column")));
                }
            }
            continue;
        }
        let root = d.sqrt();
        l[k][k] = root;
        for i in k + 1..n {
            let r = q[i][k] - (0..k).map(|j| l[i][j] * l[k][j]).sum::<f64>();
            l[i][k] = r / root;
        }
    }
    Ok(l)
}

impl ConvexFunction {
    pub fn new(spec: FunctionSpec, label: impl Into<String>) -> Result<Self, FunctionError> {
        let dim = match &spec {
            FunctionSpec::Affine(p) | FunctionSpec::ExpAffine(p) => {
                check_finite(&p.slope)?;
                check_finite(&[p.offset])?;
                p.slope.len()
            }
            FunctionSpec::QuadraticPSD { matrix, linear, constant } => {
                psd_certificate(matrix)?;
                if linear.len() != matrix.len() {
                    return Err(FunctionError::Invalid("linear term length differs from matrix size".into()));
                }
                matrix.iter().try_for_each(|r| check_finite(r))?;
                check_finite(linear)?;
                check_finite(&[*constant])?;
                matrix.len()
            }
            FunctionSpec::MaxOfAffines { pieces } => check_pieces(FunctionKind::MaxOfAffines, pieces, "piece")?,
            FunctionSpec::LogSumExp { terms } => check_pieces(FunctionKind::LogSumExp, terms, "term")?,
            FunctionSpec::HingeDistance { normal, threshold } => {
                check_finite(normal)?;
                check_finite(&[*threshold])?;
                normal.len()
            }
        };
        if dim == 0 {
            return Err(FunctionError::Invalid("functions need dimension >= 1".into()));
        }
        Ok(ConvexFunction {
            spec,
            label: label.into(),
            dim,
        })
    }

    pub fn affine(slope: Vec<f64>, offset: f64) -> Result<Self, FunctionError> {
        ConvexFunction::new(FunctionSpec::Affine(AffinePiece { slope, offset }), "affine")
    }

    /// `‖x‖²` in dimension `n`.
    pub fn squared_norm(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        ConvexFunction::new(
            FunctionSpec::QuadraticPSD {
                matrix,
                linear: vec![0.0; n],
                constant: 0.0,
            },
            "squared-norm",
        )
        .expect("identity is PSD")
    }

    /// `max(0, normal · x - threshold)`.
    pub fn hinge(normal: Vec<f64>, threshold: f64) -> Result<Self, FunctionError> {
        ConvexFunction::new(FunctionSpec::HingeDistance { normal, threshold }, "hinge")
    }

    pub fn kind(&self) -> FunctionKind {
        match self.spec {
            FunctionSpec::Affine(_) => FunctionKind::Affine,
            FunctionSpec::QuadraticPSD { .. } => FunctionKind::QuadraticPSD,
            FunctionSpec::MaxOfAffines { .. } => FunctionKind::MaxOfAffines,
            FunctionSpec::ExpAffine(_) => FunctionKind::ExpAffine,
            FunctionSpec::LogSumExp { .. } => FunctionKind::LogSumExp,
            FunctionSpec::HingeDistance { .. } => FunctionKind::HingeDistance,
        }
    }

    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn evaluate(&self, x: &Point) -> Result<f64, FunctionError> {
        if x.dim() != self.dim {
            return Err(FunctionError::DimensionMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        Ok(self.value(x.coords()))
    }

    /// For a hinge, moves the kink hyperplane so it passes through `x`.
    /// Other kinds are returned unchanged.
    pub fn with_kink_through(&self, x: &Point) -> ConvexFunction {
        match &self.spec {
            FunctionSpec::HingeDistance { normal, .. } => ConvexFunction {
                spec: FunctionSpec::HingeDistance {
                    normal: normal.clone(),
                    threshold: dot(normal, x.coords()),
                },
                label: self.label.clone(),
                dim: self.dim,
            },
            _ => self.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl ScalarField for ConvexFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.spec {
            FunctionSpec::Affine(p) => p.at(x),
            FunctionSpec::QuadraticPSD { matrix, linear, constant } => {
                let quad: f64 = matrix.iter().zip(x).map(|(row, xi)| xi * dot(row, x)).sum();
                quad + dot(linear, x) + constant
            }
            FunctionSpec::MaxOfAffines { pieces } => {
                pieces.iter().map(|p| p.at(x)).fold(f64::NEG_INFINITY, f64::max)
            }
            FunctionSpec::ExpAffine(p) => p.at(x).exp(),
            FunctionSpec::LogSumExp { terms } => {
                let top = terms.iter().map(|t| t.at(x)).fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = terms.iter().map(|t| (t.at(x) - top).exp()).sum();
                top + s.ln()
            }
            FunctionSpec::HingeDistance { normal, threshold } => (dot(normal, x) - threshold).max(0.0),
        }
    }
}

fn normal_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Unit direction scaled by `U^(1/n)`: uniform in the unit ball.
fn unit_ball(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut v = normal_vec(rng, n);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let radius = rng.random::<f64>().powf(1.0 / n as f64);
    v.iter_mut().for_each(|x| *x *= radius / norm);
    v
}

fn unit_sphere(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v = normal_vec(rng, n);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn random_piece(rng: &mut impl Rng, n: usize, offset_scale: f64) -> AffinePiece {
    AffinePiece {
        slope: unit_ball(rng, n),
        offset: offset_scale * rng.sample::<f64, _>(StandardNormal),
    }
}

/// Draws a zoo member deterministically from `(dim, kind, seed)`.
///
/// * Affine: slope uniform in the unit ball, offset standard normal.
/// * QuadraticPSD: `Q = AᵀA / n` with standard-normal `A`, standard-normal linear term and constant.
/// * MaxOfAffines, LogSumExp: 2 to 4 unit-ball pieces, offsets `N(0, 0.5²)`.
/// * ExpAffine: unit-ball slope, offset `N(0, 0.5²)`.
/// * HingeDistance: unit normal, threshold `N(0, 0.5²)`; see [`ConvexFunction::with_kink_through`].
pub fn random_convex(dim: usize, kind: FunctionKind, seed: u64) -> ConvexFunction {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = match kind {
        FunctionKind::Affine => FunctionSpec::Affine(random_piece(&mut rng, dim, 1.0)),
        FunctionKind::QuadraticPSD => {
            let a: Vec<Vec<f64>> = (0..dim).map(|_| normal_vec(&mut rng, dim)).collect();
            let mut q = vec![vec![0.0; dim]; dim];
            for i in 0..dim {
                for j in 0..=i {
                    let v = (0..dim).map(|k| a[k][i] * a[k][j]).sum::<f64>() / dim as f64;
                    q[i][j] = v;
                    q[j][i] = v;
                }
            }
            FunctionSpec::QuadraticPSD {
                matrix: q,
                linear: normal_vec(&mut rng, dim),
                constant: rng.sample(StandardNormal),
            }
        }
        FunctionKind::MaxOfAffines => {
            let count = rng.random_range(2..=4);
            FunctionSpec::MaxOfAffines {
                pieces: (0..count).map(|_| random_piece(&mut rng, dim, 0.5)).collect(),
            }
        }
        FunctionKind::ExpAffine => FunctionSpec::ExpAffine(random_piece(&mut rng, dim, 0.5)),
        FunctionKind::LogSumExp => {
            let count = rng.random_range(2..=4);
            FunctionSpec::LogSumExp {
                terms: (0..count).map(|_| random_piece(&mut rng, dim, 0.5)).collect(),
            }
        }
        FunctionKind::HingeDistance => FunctionSpec::HingeDistance {
            normal: unit_sphere(&mut rng, dim),
            threshold: 0.5 * rng.sample::<f64, _>(StandardNormal),
        },
    };
    let label = format!("{}-d{}-s{:016x}", kind.name(), dim, seed);
    ConvexFunction::new(spec, label).expect("generated parameters are valid")
}

/// Samples `trials` uniform pairs from `s` and checks
/// `f((x+y)/2) <= (f(x)+f(y))/2 + TOL_CHAIN` for each.
pub fn midpoint_convexity_check<F: ScalarField + ?Sized>(f: &F, s: &Simplex, trials: usize, seed: u64) -> bool {
    if f.dim() != s.dim() {
        return false;
    }
    let mut sampler = UniformSampler::new(s, seed);
    let mut x = vec![0.0; s.dim()];
    let mut y = vec![0.0; s.dim()];
    let mut mid = vec![0.0; s.dim()];
    for _ in 0..trials {
        sampler.next_into(&mut x);
        sampler.next_into(&mut y);
        for ((m, a), b) in mid.iter_mut().zip(&x).zip(&y) {
            *m = 0.5 * (a + b);
        }
        if f.value(&mid) > 0.5 * (f.value(&x) + f.value(&y)) + TOL_CHAIN {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    struct NegatedSquare;

    impl ScalarField for NegatedSquare {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            -(x[0] * x[0] + x[1] * x[1])
        }
    }

    #[test]
    fn closed_form_values() {
        let q = ConvexFunction::squared_norm(2);
        let v = q.evaluate(&Point::new(vec![0.3, 0.4]).unwrap()).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        let m = ConvexFunction::new(
            FunctionSpec::MaxOfAffines {
                pieces: vec![
                    AffinePiece { slope: vec![0.0], offset: 0.0 },
                    AffinePiece { slope: vec![1.0], offset: -0.5 },
                ],
            },
            "relu",
        )
        .unwrap();
        assert_eq!(m.value(&[0.75]), 0.25);
        let lse = ConvexFunction::new(
            FunctionSpec::LogSumExp {
                terms: vec![
                    AffinePiece { slope: vec![0.0], offset: 0.0 },
                    AffinePiece { slope: vec![0.0], offset: 0.0 },
                ],
            },
            "log2",
        )
        .unwrap();
        assert!((lse.value(&[3.0]) - 2f64.ln()).abs() < 1e-15);
        let h = ConvexFunction::hinge(vec![1.0, 0.0], 0.5).unwrap();
        assert_eq!(h.value(&[0.25, 9.0]), 0.0);
        assert_eq!(h.value(&[0.75, 9.0]), 0.25);
    }

    #[test]
    fn affine_is_exact_on_mixtures() {
        let f = random_convex(3, FunctionKind::Affine, 7);
        let x = [0.1, -0.4, 2.0];
        let y = [1.5, 0.3, -0.2];
        let a = 0.3;
        let mix: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + (1.0 - a) * v).collect();
        let lhs = f.value(&mix);
        let rhs = a * f.value(&x) + (1.0 - a) * f.value(&y);
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let f = ConvexFunction::squared_norm(2);
        assert_eq!(
            f.evaluate(&Point::new(vec![1.0]).unwrap()),
            Err(FunctionError::DimensionMismatch { expected: 2, actual: 1 })
        );
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let indefinite = FunctionSpec::QuadraticPSD {
            matrix: vec![vec![1.0, 0.0], vec![0.0, -1.0]],
            linear: vec![0.0, 0.0],
            constant: 0.0,
        };
        assert!(matches!(ConvexFunction::new(indefinite, "x"), Err(FunctionError::NotPsd(_))));
        let asym = FunctionSpec::QuadraticPSD {
            matrix: vec![vec![1.0, 0.5], vec![0.0, 1.0]],
            linear: vec![0.0, 0.0],
            constant: 0.0,
        };
        assert!(matches!(ConvexFunction::new(asym, "x"), Err(FunctionError::NotPsd(_))));
        let singular = FunctionSpec::QuadraticPSD {
            matrix: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            linear: vec![0.0, 0.0],
            constant: 0.0,
        };
        assert!(ConvexFunction::new(singular, "rank-one").is_ok());
        assert!(matches!(
            ConvexFunction::new(FunctionSpec::MaxOfAffines { pieces: vec![] }, "x"),
            Err(FunctionError::Empty { .. })
        ));
        assert!(matches!(
            ConvexFunction::new(FunctionSpec::LogSumExp { terms: vec![] }, "x"),
            Err(FunctionError::Empty { .. })
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in FunctionKind::ALL {
            assert_eq!(random_convex(4, kind, 99), random_convex(4, kind, 99));
            assert_ne!(random_convex(4, kind, 99), random_convex(4, kind, 100));
        }
    }

    #[test]
    fn generated_quadratics_are_certified() {
        for seed in 0..1000 {
            let f = random_convex(1 + (seed as usize % 8), FunctionKind::QuadraticPSD, seed);
            let FunctionSpec::QuadraticPSD { matrix, .. } = f.spec() else { unreachable!() };
            assert!(psd_certificate(matrix).is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn midpoint_check_cases() {
        let tri = Simplex::standard(2).unwrap();
        assert!(midpoint_convexity_check(&random_convex(2, FunctionKind::Affine, 1), &tri, 1000, 3));
        assert!(midpoint_convexity_check(&ConvexFunction::squared_norm(2), &tri, 1000, 3));
        assert!(!midpoint_convexity_check(&NegatedSquare, &tri, 1000, 3));
        // explicit violating pair
        let f = NegatedSquare;
        assert!(f.value(&[0.5, 0.0]) > 0.5 * (f.value(&[0.0, 0.0]) + f.value(&[1.0, 0.0])));
        let max = random_convex(2, FunctionKind::MaxOfAffines, 5);
        assert!(midpoint_convexity_check(&max, &tri, 10_000, 11));
    }

    #[test]
    fn json_descriptor_shape() {
        let f = ConvexFunction::hinge(vec![1.0], 0.25).unwrap();
        let v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(v["kind"], "HingeDistance");
        assert_eq!(v["params"]["threshold"], 0.25);
        assert_eq!(v["label"], "hinge");
        let bad = r#"{"kind":"QuadraticPSD","params":{"matrix":[[-1.0]],"linear":[0.0],"constant":0.0},"label":"neg"}"#;
        assert!(ConvexFunction::from_json(bad).is_err());
        let unknown = r#"{"kind":"Cubic","params":{},"label":"c"}"#;
        assert!(ConvexFunction::from_json(unknown).is_err());
    }

    #[test]
    fn hinge_anchoring_moves_threshold() {
        let f = random_convex(3, FunctionKind::HingeDistance, 2);
        let x = Point::new(vec![0.2, -0.1, 0.4]).unwrap();
        let g = f.with_kink_through(&x);
        assert!(g.value(x.coords()).abs() < 1e-15);
        let a = random_convex(3, FunctionKind::Affine, 2);
        assert_eq!(a.with_kink_through(&x), a);
    }
}
