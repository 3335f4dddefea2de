//! Named bound-chain strategies.
//!
//! Every chain in [`crate::bounds`] is wrapped in a [`BoundChain`] so the CLI
//! and the campaign runner can select chains by name at runtime. A strategy
//! reads the parameters it needs from [`BoundInputs`], builds whatever
//! subsimplex its hypothesis calls for, and pulls ground truths from a
//! [`TruthCache`] shared across all strategies of one case.

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundsError, ChainReport};
use crate::functions::ConvexFunction;
use crate::quadrature::{ground_truth, IntegralEstimate, QuadratureError};
use crate::simplex::{GeometryError, Point, Simplex};
use crate::tolerance::TOL_CHAIN;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ChainError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("{chain} needs a one-dimensional interval case")]
    MissingInterval { chain: &'static str },
    #[error("unknown chain {0:?}")]
    UnknownChain(String),
}

impl From<GeometryError> for ChainError {
    fn from(e: GeometryError) -> Self {
        ChainError::Bounds(BoundsError::Geometry(e))
    }
}

/// Homothety about the centroid, optionally followed by a vertex relabeling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Homothety {
    pub scale: f64,
    #[serde(default)]
    pub permutation: Option<Vec<usize>>,
}

impl Homothety {
    pub fn build(&self, s: &Simplex) -> Result<Simplex, GeometryError> {
        let h = s.homothety_about_centroid(self.scale)?;
        match &self.permutation {
            None => Ok(h),
            Some(perm) => {
                let mut seen = vec![false; h.vertex_count()];
                if perm.len() != h.vertex_count() || !perm.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true)) {
                    return Err(GeometryError::InvalidParameter(format!(
                        "{perm:?} is not a permutation of {} vertices",
                        h.vertex_count()
                    )));
                }
                Simplex::new(perm.iter().map(|&i| h.vertex(i).clone()).collect())
            }
        }
    }
}

/// A subsimplex centered at `center` with absolute scale `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenteredSub {
    pub center: Point,
    pub scale: f64,
}

impl CenteredSub {
    pub fn build(&self, s: &Simplex) -> Result<Simplex, GeometryError> {
        s.centered_subsimplex(&self.center, self.scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    pub points: Vec<Point>,
    pub betas: Vec<f64>,
}

/// A one-dimensional case for the interval corollaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCase {
    pub a: f64,
    pub b: f64,
    pub function: ConvexFunction,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub y: f64,
}

/// All parameters any registered chain may ask for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub simplex: Simplex,
    pub function: ConvexFunction,
    /// Free point of the single-point refinement.
    pub point: Point,
    /// Subsimplex sharing the parent's centroid.
    pub homothety: Homothety,
    /// Zero-based vertex of the shared-centroid subsimplex; `None` sweeps all.
    pub vertex: Option<usize>,
    /// Subsimplex with a prescribed centroid.
    pub centered: CenteredSub,
    pub mixture: Mixture,
    pub interval: Option<IntervalCase>,
    /// Floor of the verdict tolerance (`max(floor, 4·std_error)`).
    pub tolerance_floor: f64,
}

impl BoundInputs {
    /// Inputs with neutral defaults: centroid point, identity subsimplices,
    /// the centroid as the only mixture point, and an interval case when `s`
    /// is one-dimensional.
    pub fn with_defaults(simplex: Simplex, function: ConvexFunction) -> Self {
        let c = simplex.centroid();
        let interval = (simplex.dim() == 1).then(|| {
            let a = simplex.vertex(0).coords()[0];
            let b = simplex.vertex(1).coords()[0];
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            IntervalCase {
                a,
                b,
                function: function.clone(),
                lambda: 0.5,
                p: 1.0,
                q: 1.0,
                y: (b - a) / 2.0,
            }
        });
        BoundInputs {
            point: c.clone(),
            homothety: Homothety {
                scale: 1.0,
                permutation: None,
            },
            vertex: None,
            centered: CenteredSub {
                center: c.clone(),
                scale: 1.0,
            },
            mixture: Mixture {
                points: vec![c],
                betas: vec![1.0],
            },
            interval,
            tolerance_floor: TOL_CHAIN,
            simplex,
            function,
        }
    }

    fn interval(&self, chain: &'static str) -> Result<&IntervalCase, ChainError> {
        self.interval.as_ref().ok_or(ChainError::MissingInterval { chain })
    }
}

/// The integration domains ground truths are cached for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(usize)]
pub enum Domain {
    Simplex = 0,
    Centered = 1,
    Interval = 2,
    Window = 3,
}

/// Lazily computed ground truths, one per [`Domain`], each with its own seed.
#[derive(Debug, Clone)]
pub struct TruthCache {
    mc_samples: usize,
    seeds: [u64; 4],
    values: [Option<IntegralEstimate>; 4],
}

impl TruthCache {
    pub fn new(mc_samples: usize, seeds: [u64; 4]) -> Self {
        TruthCache {
            mc_samples,
            seeds,
            values: Default::default(),
        }
    }

    pub fn get(
        &mut self,
        domain: Domain,
        f: &ConvexFunction,
        s: &Simplex,
    ) -> Result<IntegralEstimate, QuadratureError> {
        let slot = domain as usize;
        if let Some(v) = &self.values[slot] {
            return Ok(v.clone());
        }
        let v = ground_truth(f, s, self.mc_samples, self.seeds[slot])?;
        self.values[slot] = Some(v.clone());
        Ok(v)
    }
}

pub trait BoundChain: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError>;

    /// Labels `(mean, refined upper, classical upper)` used for tightness
    /// ratios, or `None` when the chain has no refined upper bound.
    fn tightness_terms(&self) -> Option<(&'static str, &'static str, &'static str)> {
        None
    }
}

struct Choquet;

impl BoundChain for Choquet {
    fn name(&self) -> &'static str {
        "choquet"
    }
    fn summary(&self) -> &'static str {
        "f(centroid) <= mean <= vertex average"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let gt = truths.get(Domain::Simplex, &inputs.function, &inputs.simplex)?;
        Ok(vec![bounds::choquet_chain(&inputs.function, &inputs.simplex, &gt)?])
    }
}

struct PointRefinement;

impl BoundChain for PointRefinement {
    fn name(&self) -> &'static str {
        "thm2"
    }
    fn summary(&self) -> &'static str {
        "mean <= (Σ(1-λ_k(p)) f(P_k) + f(p))/(n+1) <= vertex average"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let gt = truths.get(Domain::Simplex, &inputs.function, &inputs.simplex)?;
        Ok(vec![bounds::thm2_upper(&inputs.function, &inputs.simplex, &inputs.point, &gt)?])
    }
    fn tightness_terms(&self) -> Option<(&'static str, &'static str, &'static str)> {
        Some(("mean", "refined_upper", "vertex_average"))
    }
}

struct SharedCentroid;

impl BoundChain for SharedCentroid {
    fn name(&self) -> &'static str {
        "thm3"
    }
    fn summary(&self) -> &'static str {
        "two-sided refinement from a subsimplex with the same centroid"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let s = &inputs.simplex;
        let sub = inputs.homothety.build(s)?;
        let gt = truths.get(Domain::Simplex, &inputs.function, s)?;
        let vertices: Vec<usize> = match inputs.vertex {
            Some(j) => vec![j],
            None => (0..s.vertex_count()).collect(),
        };
        vertices
            .into_iter()
            .map(|j| Ok(bounds::thm3_chain(&inputs.function, s, &sub, j, &gt)?))
            .collect()
    }
    fn tightness_terms(&self) -> Option<(&'static str, &'static str, &'static str)> {
        Some(("mean", "refined_upper", "vertex_average"))
    }
}

struct PrescribedCentroid;

impl BoundChain for PrescribedCentroid {
    fn name(&self) -> &'static str {
        "thm4"
    }
    fn summary(&self) -> &'static str {
        "f(P) <= mean over subsimplex <= Σ λ_j(P) f(P_j)"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let sub = inputs.centered.build(&inputs.simplex)?;
        let gt = truths.get(Domain::Centered, &inputs.function, &sub)?;
        Ok(vec![bounds::thm4_chain(&inputs.function, &inputs.simplex, &sub, &gt)?])
    }
}

struct PrescribedCentroidUpper;

impl BoundChain for PrescribedCentroidUpper {
    fn name(&self) -> &'static str {
        "thm5"
    }
    fn summary(&self) -> &'static str {
        "mean over subsimplex <= (n Σ λ_j(P) f(P_j) + f(P))/(n+1)"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let sub = inputs.centered.build(&inputs.simplex)?;
        let gt = truths.get(Domain::Centered, &inputs.function, &sub)?;
        Ok(vec![bounds::thm5_upper(&inputs.function, &inputs.simplex, &sub, &gt)?])
    }
    fn tightness_terms(&self) -> Option<(&'static str, &'static str, &'static str)> {
        Some(("mean_sub", "refined_upper", "vertex_weighted"))
    }
}

struct CentroidMixture;

impl BoundChain for CentroidMixture {
    fn name(&self) -> &'static str {
        "thm6"
    }
    fn summary(&self) -> &'static str {
        "f(centroid) <= Σ β_j f(M_j) <= vertex average when Σ β_j M_j is the centroid"
    }
    fn evaluate(&self, inputs: &BoundInputs, _truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        Ok(vec![bounds::thm6_chain(
            &inputs.function,
            &inputs.simplex,
            &inputs.mixture.points,
            &inputs.mixture.betas,
        )?])
    }
}

struct IntervalRefinement;

impl BoundChain for IntervalRefinement {
    fn name(&self) -> &'static str {
        "cor2"
    }
    fn summary(&self) -> &'static str {
        "five-term interval chain parameterized by λ ∈ [0, 1]"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let case = inputs.interval("cor2")?;
        let s = Simplex::interval(case.a, case.b)?;
        let gt = truths.get(Domain::Interval, &case.function, &s)?;
        Ok(vec![bounds::cor2_chain(&case.function, case.a, case.b, case.lambda, &gt)?])
    }
    fn tightness_terms(&self) -> Option<(&'static str, &'static str, &'static str)> {
        Some(("mean", "refined_upper", "endpoint_average"))
    }
}

struct WeightedWindow;

impl BoundChain for WeightedWindow {
    fn name(&self) -> &'static str {
        "cor3"
    }
    fn summary(&self) -> &'static str {
        "f(A) <= mean over [A-y, A+y] <= (p f(a) + q f(b))/(p+q)"
    }
    fn evaluate(&self, inputs: &BoundInputs, truths: &mut TruthCache) -> Result<Vec<ChainReport>, ChainError> {
        let case = inputs.interval("cor3")?;
        let (_, lo, hi) = bounds::cor3_window(case.p, case.q, case.a, case.b, case.y);
        let window = Simplex::interval(lo, hi)?;
        let gt = truths.get(Domain::Window, &case.function, &window)?;
        Ok(vec![bounds::cor3_check(
            case.p,
            case.q,
            case.a,
            case.b,
            case.y,
            &case.function,
            &gt,
        )?])
    }
}

/// Chains addressable by name, in registration order.
pub struct ChainRegistry {
    chains: Vec<Box<dyn BoundChain>>,
}

impl Default for ChainRegistry {
    fn default() -> Self {
        ChainRegistry::builtin()
    }
}

impl ChainRegistry {
    pub fn empty() -> Self {
        ChainRegistry { chains: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = ChainRegistry::empty();
        r.register(Box::new(Choquet));
        r.register(Box::new(PointRefinement));
        r.register(Box::new(SharedCentroid));
        r.register(Box::new(PrescribedCentroid));
        r.register(Box::new(PrescribedCentroidUpper));
        r.register(Box::new(CentroidMixture));
        r.register(Box::new(IntervalRefinement));
        r.register(Box::new(WeightedWindow));
        r
    }

    /// Adds a chain, replacing any existing chain with the same name.
    pub fn register(&mut self, chain: Box<dyn BoundChain>) {
        if let Some(slot) = self.chains.iter_mut().find(|c| c.name() == chain.name()) {
            *slot = chain;
        } else {
            self.chains.push(chain);
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn BoundChain> {
        self.chains.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.chains.iter().map(|c| c.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn BoundChain> {
        self.chains.iter().map(|c| c.as_ref())
    }

    /// Runs one chain by name and applies the inputs' tolerance floor.
    pub fn evaluate(
        &self,
        name: &str,
        inputs: &BoundInputs,
        truths: &mut TruthCache,
    ) -> Result<Vec<ChainReport>, ChainError> {
        let chain = self.get(name).ok_or_else(|| ChainError::UnknownChain(name.to_string()))?;
        let reports = chain.evaluate(inputs, truths)?;
        Ok(reports
            .into_iter()
            .map(|r| r.with_tolerance_floor(inputs.tolerance_floor))
            .collect())
    }
}

/// `(refined - mean) / (classical - mean)`, or `None` when the denominator
/// is within [`TOL_CHAIN`] of zero.
pub fn tightness_ratio(report: &ChainReport, terms: (&str, &str, &str)) -> Option<f64> {
    let mean = report.term(terms.0)?;
    let refined = report.term(terms.1)?;
    let classical = report.term(terms.2)?;
    let den = classical - mean;
    if den.abs() <= TOL_CHAIN {
        None
    } else {
        Some((refined - mean) / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;

    #[test]
    fn builtin_names() {
        let r = ChainRegistry::builtin();
        assert_eq!(r.names(), ["choquet", "thm2", "thm3", "thm4", "thm5", "thm6", "cor2", "cor3"]);
        assert!(r.get("thm7").is_none());
    }

    #[test]
    fn defaults_on_unit_interval_pass() {
        let s = Simplex::interval(0.0, 1.0).unwrap();
        let inputs = BoundInputs::with_defaults(s, ConvexFunction::squared_norm(1));
        let registry = ChainRegistry::builtin();
        let mut truths = TruthCache::new(1000, [1, 2, 3, 4]);
        for name in registry.names() {
            let reports = registry.evaluate(name, &inputs, &mut truths).unwrap();
            assert!(!reports.is_empty());
            for r in reports {
                assert_eq!(r.verdict, Verdict::Pass, "{name}: {r:?}");
            }
        }
        let err = registry.evaluate("nope", &inputs, &mut truths).unwrap_err();
        assert_eq!(err, ChainError::UnknownChain("nope".into()));
    }

    #[test]
    fn interval_chains_need_interval() {
        let s = Simplex::standard(2).unwrap();
        let inputs = BoundInputs::with_defaults(s, ConvexFunction::squared_norm(2));
        let mut truths = TruthCache::new(1000, [0; 4]);
        assert_eq!(
            ChainRegistry::builtin().evaluate("cor2", &inputs, &mut truths),
            Err(ChainError::MissingInterval { chain: "cor2" })
        );
    }

    #[test]
    fn thm3_sweeps_all_vertices() {
        let s = Simplex::standard(3).unwrap();
        let mut inputs = BoundInputs::with_defaults(s, ConvexFunction::squared_norm(3));
        inputs.homothety = Homothety {
            scale: 0.5,
            permutation: Some(vec![2, 0, 3, 1]),
        };
        let mut truths = TruthCache::new(1000, [0; 4]);
        let reports = ChainRegistry::builtin().evaluate("thm3", &inputs, &mut truths).unwrap();
        assert_eq!(reports.iter().map(|r| r.index.unwrap()).collect::<Vec<_>>(), [1, 2, 3, 4]);
        inputs.homothety.permutation = Some(vec![0, 0, 1, 2]);
        assert!(ChainRegistry::builtin().evaluate("thm3", &inputs, &mut truths).is_err());
    }

    #[test]
    fn tightness_of_midpoint_refinement() {
        let s = Simplex::interval(0.0, 1.0).unwrap();
        let f = ConvexFunction::squared_norm(1);
        let inputs = BoundInputs::with_defaults(s, f);
        let mut truths = TruthCache::new(1000, [0; 4]);
        let registry = ChainRegistry::builtin();
        let r = &registry.evaluate("thm2", &inputs, &mut truths).unwrap()[0];
        let ratio = tightness_ratio(r, registry.get("thm2").unwrap().tightness_terms().unwrap()).unwrap();
        assert!((ratio - 0.25).abs() < 1e-12);
    }
}
