//! Numerical tolerances shared by every module.

/// Absolute tolerance on barycentric weights, their sum, and point reconstruction.
pub const TOL_GEOM: f64 = 1e-9;

/// A simplex is degenerate when `|det(edges)| <= DEGENERACY_REL * scale^n`,
/// where `scale` is the largest absolute entry of the edge matrix.
pub const DEGENERACY_REL: f64 = 1e-12;

/// Absolute tolerance for every inequality chain assertion.
pub const TOL_CHAIN: f64 = 1e-8;

/// Multiplier on the Monte Carlo standard error when it dominates [`TOL_CHAIN`].
pub const MC_SIGMA: f64 = 4.0;

/// Random simplices whose edge matrix is worse conditioned than this are rejected.
pub const CONDITION_LIMIT: f64 = 1e6;

/// Default Monte Carlo sample count for ground-truth integrals.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

/// Verdict tolerance for a comparison against a ground truth with the given standard error.
pub fn chain_tolerance(std_error: f64) -> f64 {
    TOL_CHAIN.max(MC_SIGMA * std_error)
}
