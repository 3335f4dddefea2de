use serde::{Deserialize, Serialize};

use super::campaign::CampaignResult;
use super::HarnessError;
use crate::registry::ChainRegistry;

/// Distribution of `(refined - mean)/(classical - mean)` for one chain.
/// The order statistics are `None` when every trial was degenerate (0/0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessRow {
    pub theorem: String,
    pub n: usize,
    pub degenerate: usize,
    pub min: Option<f64>,
    pub p50: Option<f64>,
    pub max: Option<f64>,
}

/// One row per refined chain the campaign ran. Requires the choquet
/// baseline and at least one chain with a refined upper bound.
pub fn tightness_table(result: &CampaignResult) -> Result<Vec<TightnessRow>, HarnessError> {
    let registry = ChainRegistry::builtin();
    let ran = |name: &str| result.config.theorems.iter().any(|t| t == name);
    if !ran("choquet") {
        return Err(HarnessError::MissingBaseline("choquet was not part of the campaign".into()));
    }
    let rows: Vec<TightnessRow> = result
        .config
        .theorems
        .iter()
        .filter(|t| registry.get(t).and_then(|c| c.tightness_terms()).is_some())
        .map(|t| {
            let summary = result.tightness.get(t);
            TightnessRow {
                theorem: t.clone(),
                n: summary.map_or(0, |s| s.n),
                degenerate: summary.map_or(0, |s| s.degenerate),
                min: summary.and_then(|s| s.min),
                p50: summary.and_then(|s| s.p50),
                max: summary.and_then(|s| s.max),
            }
        })
        .collect();
    if rows.is_empty() {
        return Err(HarnessError::MissingBaseline("no refined chain was part of the campaign".into()));
    }
    Ok(rows)
}
