//! Counterexample search for the weighted-window interval chain.
//!
//! When `y` exceeds the threshold the window `[A - y, A + y]` leaves `[a, b]`
//! and some convex function violates the upper bound. Hinges `max(0, ±(x - k))`
//! are the extreme rays of the 1-D convex cone modulo affines, so the search
//! only scans kink positions `k` and the two orientations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::bounds::{cor3_check, cor3_threshold, cor3_window, ChainReport};
use crate::functions::ConvexFunction;
use crate::quadrature::integrate_hinge_1d;
use crate::tolerance::TOL_CHAIN;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cor3Witness {
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub y: f64,
    pub threshold: f64,
    pub kink: f64,
    /// `+1` for `max(0, x - k)`, `-1` for `max(0, k - x)`.
    pub orientation: i8,
    pub function: ConvexFunction,
    pub report: ChainReport,
    pub evaluations: usize,
}

fn hinge(kink: f64, orientation: i8) -> ConvexFunction {
    let w = f64::from(orientation);
    ConvexFunction::hinge(vec![w], w * kink).expect("finite hinge")
}

/// Searches for a hinge whose chain has a slack below `-TOL_CHAIN`.
///
/// Half of `budget` goes to a uniform grid over the union of `[a, b]` and the
/// window (both endpoints are grid nodes), the rest to random perturbations
/// of the best kink with a shrinking radius. Returns the most negative case
/// found, or `None` if nothing beats the tolerance within budget.
pub fn search_cor3_counterexample(
    p: f64,
    q: f64,
    a: f64,
    b: f64,
    y: f64,
    budget: usize,
    seed: u64,
) -> Result<Option<Cor3Witness>, HarnessError> {
    if !(p > 0.0 && q > 0.0 && y > 0.0 && a < b) || ![p, q, a, b, y].iter().all(|v| v.is_finite()) {
        return Err(HarnessError::InvalidConfig(format!(
            "need p, q, y > 0 and a < b, got p={p}, q={q}, a={a}, b={b}, y={y}"
        )));
    }
    let threshold = cor3_threshold(p, q, a, b);
    if y <= threshold {
        return Err(HarnessError::ConditionNotViolated { y, threshold });
    }
    let (_, lo, hi) = cor3_window(p, q, a, b, y);
    let (span_lo, span_hi) = (lo.min(a), hi.max(b));

    let evaluate = |kink: f64, orientation: i8| -> Result<(f64, ChainReport), HarnessError> {
        let f = hinge(kink, orientation);
        let gt = integrate_hinge_1d(&f, lo, hi).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        let report = cor3_check(p, q, a, b, y, &f, &gt).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        Ok((report.min_slack(), report))
    };

    let mut evaluations = 0;
    let mut best: Option<(f64, f64, i8, ChainReport)> = None;
    let mut consider = |kink: f64, orientation: i8, best: &mut Option<(f64, f64, i8, ChainReport)>| {
        evaluations += 1;
        let (slack, report) = evaluate(kink, orientation)?;
        if best.as_ref().is_none_or(|b| slack < b.0) {
            *best = Some((slack, kink, orientation, report));
        }
        Ok::<usize, HarnessError>(evaluations)
    };

    let grid = (budget / 4).max(1);
    let mut nodes: Vec<f64> = (0..=grid)
        .map(|i| span_lo + (span_hi - span_lo) * i as f64 / grid as f64)
        .collect();
    nodes.extend([a, b]);
    let mut used = 0;
    'grid: for &k in &nodes {
        for orientation in [1, -1] {
            if used >= budget {
                break 'grid;
            }
            used = consider(k, orientation, &mut best)?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radius = (span_hi - span_lo) / grid as f64;
    while used < budget {
        let (_, center, orientation, _) = best.as_ref().expect("grid evaluated at least once");
        let (center, orientation) = (*center, *orientation);
        let k = center + radius * rng.random_range(-1.0..=1.0);
        used = consider(k, orientation, &mut best)?;
        radius *= 0.999;
    }

    Ok(best.filter(|b| b.0 < -TOL_CHAIN).map(|(_, kink, orientation, report)| Cor3Witness {
        p,
        q,
        a,
        b,
        y,
        threshold,
        kink,
        orientation,
        function: hinge(kink, orientation),
        report,
        evaluations: used,
    }))
}
