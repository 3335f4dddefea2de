//! Simplex geometry: volumes, barycentric coordinates, vertex replacement and
//! the subsimplex families used by the refined bound chains.
//!
//! Every value here is immutable once built. Constructors validate and return
//! new values; a [`Simplex`] caches its volume and the LU factorization of its
//! edge matrix so repeated barycentric solves are cheap.

use std::fmt;

use nalgebra::{DMatrix, DVector, LU, Dyn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance::{DEGENERACY_REL, TOL_GEOM};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("a simplex in dimension {dimension} needs {expected} vertices, got {actual}")]
    WrongVertexCount {
        dimension: usize,
        expected: usize,
        actual: usize,
    },
    #[error("points must have dimension >= 1")]
    EmptyPoint,
    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("degenerate simplex: |det| = {det:e} is below threshold {threshold:e}")]
    DegenerateSimplex { det: f64, threshold: f64 },
    #[error("barycentric system is singular")]
    SingularSystem,
    #[error("point lies outside the simplex (min barycentric weight {min_weight:e})")]
    PointOutsideSimplex { min_weight: f64 },
    #[error("subsimplex escapes its parent (scale {t} exceeds limit {t_max})")]
    SubsimplexEscapesParent { t: f64, t_max: f64 },
    #[error("vertex index {index} out of range for {count} vertices")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A point of `R^n` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(GeometryError::NonFinite { index, value });
        }
        Ok(Point(coords))
    }

    /// Builds a point from coordinates the caller already knows are finite.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = GeometryError;

    fn try_from(coords: Vec<f64>) -> Result<Self, Self::Error> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Barycentric weights `λ_1(x), …, λ_{n+1}(x)` of a point relative to a simplex.
///
/// Weights produced for points inside the simplex are clamped to be
/// nonnegative and renormalized to sum to one; points outside keep their raw
/// (possibly negative) weights so callers can tell the difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BarycentricCoords {
    weights: Vec<f64>,
}

impl BarycentricCoords {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self) -> bool {
        self.min_weight() >= -TOL_GEOM
    }

    pub fn max_abs_diff(&self, other: &BarycentricCoords) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Clamps weights in `[-TOL_GEOM, 0)` to zero and renormalizes. Weights
    /// below `-TOL_GEOM` are left untouched.
    fn normalized(mut weights: Vec<f64>) -> Self {
        if weights.iter().all(|&w| w >= -TOL_GEOM) {
            for w in weights.iter_mut() {
                if *w < 0.0 {
                    *w = 0.0;
                }
            }
            let total: f64 = weights.iter().sum();
            if total > 0.0 {
                for w in weights.iter_mut() {
                    *w /= total;
                }
            }
        }
        BarycentricCoords { weights }
    }
}

impl std::ops::Index<usize> for BarycentricCoords {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.weights[i]
    }
}

/// A nondegenerate `n`-simplex in `R^n`.
#[derive(Clone)]
pub struct Simplex {
    vertices: Vec<Point>,
    volume: f64,
    edge_lu: LU<f64, Dyn, Dyn>,
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Simplex")
            .field("vertices", &self.vertices)
            .field("volume", &self.volume)
            .finish()
    }
}

impl PartialEq for Simplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Edge matrix with columns `V_k - V_0`, `k = 1..=n`.
fn edge_matrix<'a>(vertices: impl IntoIterator<Item = &'a [f64]>, n: usize) -> DMatrix<f64> {
    let mut iter = vertices.into_iter();
    let base = iter.next().expect("at least one vertex");
    let mut m = DMatrix::zeros(n, n);
    for (col, v) in iter.enumerate() {
        for row in 0..n {
            m[(row, col)] = v[row] - base[row];
        }
    }
    m
}

impl Simplex {
    /// Builds a simplex from `n+1` points of dimension `n`.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.first().map(Point::dim).ok_or(GeometryError::EmptyPoint)?;
        if vertices.len() != n + 1 {
            return Err(GeometryError::WrongVertexCount {
                dimension: n,
                expected: n + 1,
                actual: vertices.len(),
            });
        }
        if let Some(bad) = vertices.iter().find(|v| v.dim() != n) {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                actual: bad.dim(),
            });
        }
        let edges = edge_matrix(vertices.iter().map(Point::coords), n);
        let scale = edges.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let threshold = DEGENERACY_REL * scale.powi(n as i32);
        let lu = edges.lu();
        let det = lu.determinant();
        if !(det.abs() > threshold) || scale == 0.0 {
            return Err(GeometryError::DegenerateSimplex {
                det: det.abs(),
                threshold,
            });
        }
        Ok(Simplex {
            vertices,
            volume: det.abs() / factorial(n),
            edge_lu: lu,
        })
    }

    pub fn from_coords(vertices: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        let points = vertices
            .into_iter()
            .map(Point::new)
            .collect::<Result<Vec<_>, _>>()?;
        Simplex::new(points)
    }

    /// The simplex spanned by the origin and the unit basis vectors.
    pub fn standard(n: usize) -> Result<Self, GeometryError> {
        let mut vertices = vec![vec![0.0; n]];
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            vertices.push(e);
        }
        Simplex::from_coords(vertices)
    }

    /// The one-dimensional simplex `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Result<Self, GeometryError> {
        Simplex::from_coords(vec![vec![a], vec![b]])
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    /// Lebesgue volume `|det[P_2-P_1, …, P_{n+1}-P_1]| / n!`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn centroid(&self) -> Point {
        let w = 1.0 / self.vertex_count() as f64;
        let mut c = vec![0.0; self.dim()];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v.coords()) {
                *ci += vi;
            }
        }
        for ci in c.iter_mut() {
            *ci *= w;
        }
        Point::from_vec_unchecked(c)
    }

    /// `Σ w_k P_k` for a weight vector of length `n+1`.
    pub fn combine(&self, weights: &[f64]) -> Point {
        debug_assert_eq!(weights.len(), self.vertex_count());
        let mut x = vec![0.0; self.dim()];
        self.combine_into(weights, &mut x);
        Point::from_vec_unchecked(x)
    }

    pub(crate) fn combine_into(&self, weights: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (o, vi) in out.iter_mut().zip(v.coords()) {
                *o += w * vi;
            }
        }
    }

    fn check_dim(&self, x: &Point) -> Result<(), GeometryError> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                actual: x.dim(),
            });
        }
        Ok(())
    }

    /// Barycentric coordinates from the linear system `Σ λ_k P_k = x`, `Σ λ_k = 1`.
    ///
    /// The sum constraint is eliminated so the solve runs on the `n×n` edge
    /// matrix. Weights are clamped and renormalized when `x` lies inside
    /// (within [`TOL_GEOM`]); otherwise the raw weights are returned.
    pub fn barycentric_solve(&self, x: &Point) -> Result<BarycentricCoords, GeometryError> {
        self.check_dim(x)?;
        let base = self.vertices[0].coords();
        let rhs = DVector::from_iterator(
            self.dim(),
            x.coords().iter().zip(base).map(|(xi, bi)| xi - bi),
        );
        let mu = self.edge_lu.solve(&rhs).ok_or(GeometryError::SingularSystem)?;
        let mut weights = Vec::with_capacity(self.vertex_count());
        weights.push(1.0 - mu.iter().sum::<f64>());
        weights.extend(mu.iter().copied());
        Ok(BarycentricCoords::normalized(weights))
    }

    /// Barycentric coordinates as volume ratios `Vol(Δ_k(x)) / Vol(Δ)`, where
    /// `Δ_k(x)` replaces vertex `k` by `x`.
    pub fn barycentric_volumes(&self, x: &Point) -> Result<BarycentricCoords, GeometryError> {
        let solved = self.barycentric_solve(x)?;
        if !solved.is_convex() {
            return Err(GeometryError::PointOutsideSimplex {
                min_weight: solved.min_weight(),
            });
        }
        let n = self.dim();
        let full = self.volume * factorial(n);
        let weights = (0..self.vertex_count())
            .map(|k| {
                let coords = self
                    .vertices
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if i == k { x.coords() } else { v.coords() });
                edge_matrix(coords, n).determinant().abs() / full
            })
            .collect();
        Ok(BarycentricCoords::normalized(weights))
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.barycentric_solve(x).map(|b| b.is_convex()).unwrap_or(false)
    }

    /// `Δ_i(p)`: the simplex with vertex `i` (zero-based) replaced by `p`.
    pub fn replace_vertex(&self, i: usize, p: &Point) -> Result<Simplex, GeometryError> {
        if i >= self.vertex_count() {
            return Err(GeometryError::IndexOutOfRange {
                index: i,
                count: self.vertex_count(),
            });
        }
        let lambda = self.barycentric_solve(p)?;
        if !lambda.is_convex() {
            return Err(GeometryError::PointOutsideSimplex {
                min_weight: lambda.min_weight(),
            });
        }
        let mut vertices = self.vertices.clone();
        vertices[i] = p.clone();
        Simplex::new(vertices)
    }

    /// Homothety `x ↦ c + t(x - c)` about the centroid `c`, `0 < t <= 1`.
    pub fn homothety_about_centroid(&self, t: f64) -> Result<Simplex, GeometryError> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(GeometryError::InvalidParameter(format!(
                "homothety scale must lie in (0, 1], got {t}"
            )));
        }
        let c = self.centroid();
        self.scaled_copy(&c, &c, t)
    }

    /// Vertices `p + t(P_k - c)` around `center`, reusing the vertex offsets from `c`.
    fn scaled_copy(&self, c: &Point, center: &Point, t: f64) -> Result<Simplex, GeometryError> {
        if t == 1.0 && c == center {
            return Ok(self.clone());
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let coords = v
                    .coords()
                    .iter()
                    .zip(c.coords())
                    .zip(center.coords())
                    .map(|((vi, ci), pi)| pi + t * (vi - ci))
                    .collect();
                Point::from_vec_unchecked(coords)
            })
            .collect();
        Simplex::new(vertices)
    }

    /// Largest scale `t` for which [`Simplex::centered_subsimplex`] stays inside:
    /// `(n+1) · min_k λ_k(p)`.
    pub fn centered_scale_limit(&self, p: &Point) -> Result<f64, GeometryError> {
        let lambda = self.barycentric_solve(p)?;
        Ok(self.vertex_count() as f64 * lambda.min_weight().max(0.0))
    }

    /// The subsimplex with vertices `p + t(P_k - c)`: a translated homothety
    /// whose centroid is `p`.
    ///
    /// Its vertices have weights `λ_j(P'_k) = λ_j(p) + t(δ_jk - 1/(n+1))`, so
    /// containment holds exactly when `t <= (n+1) · min_k λ_k(p)`.
    pub fn centered_subsimplex(&self, p: &Point, t: f64) -> Result<Simplex, GeometryError> {
        let lambda = self.barycentric_solve(p)?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(GeometryError::InvalidParameter(format!(
                "subsimplex scale must be positive, got {t}"
            )));
        }
        let m = self.vertex_count() as f64;
        let t_max = m * lambda.min_weight().max(0.0);
        if lambda.min_weight() - t / m < -TOL_GEOM {
            return Err(GeometryError::SubsimplexEscapesParent { t, t_max });
        }
        let c = self.centroid();
        self.scaled_copy(&c, p, t)
    }

    /// Ratio of largest to smallest singular value of the edge matrix.
    pub fn edge_condition_number(&self) -> f64 {
        let edges = edge_matrix(self.vertices.iter().map(Point::coords), self.dim());
        let sv = edges.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    }

    pub fn max_vertex_distance(&self, other: &Simplex) -> f64 {
        self.vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn to_descriptor(&self) -> SimplexDescriptor {
        SimplexDescriptor {
            dimension: self.dim(),
            vertices: self.vertices.iter().map(|v| v.coords().to_vec()).collect(),
        }
    }

    /// Writes `{"dimension": n, "vertices": [[...], ...]}` with every number
    /// printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let cells: Vec<String> = v.coords().iter().map(|c| format!("{c:.16e}")).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!(
            "{{\"dimension\": {}, \"vertices\": [{}]}}",
            self.dim(),
            rows.join(", ")
        )
    }

    pub fn from_json(text: &str) -> Result<Self, SimplexParseError> {
        let desc: SimplexDescriptor = serde_json::from_str(text)?;
        Ok(Simplex::try_from(desc)?)
    }
}

#[derive(Debug, Error)]
pub enum SimplexParseError {
    #[error("malformed simplex JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid simplex: {0}")]
    Geometry(#[from] GeometryError),
}

/// Serialized form of a simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexDescriptor {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl TryFrom<SimplexDescriptor> for Simplex {
    type Error = GeometryError;

    fn try_from(desc: SimplexDescriptor) -> Result<Self, Self::Error> {
        if desc.dimension == 0 {
            return Err(GeometryError::EmptyPoint);
        }
        if desc.vertices.len() != desc.dimension + 1 {
            return Err(GeometryError::WrongVertexCount {
                dimension: desc.dimension,
                expected: desc.dimension + 1,
                actual: desc.vertices.len(),
            });
        }
        if let Some(bad) = desc.vertices.iter().find(|v| v.len() != desc.dimension) {
            return Err(GeometryError::DimensionMismatch {
                expected: desc.dimension,
                actual: bad.len(),
            });
        }
        Simplex::from_coords(desc.vertices)
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_descriptor().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let desc = SimplexDescriptor::deserialize(deserializer)?;
        Simplex::try_from(desc).map_err(serde::de::Error::custom)
    }
}
