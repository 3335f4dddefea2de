//! Randomized verification campaigns, tightness statistics and the
//! weighted-window counterexample search.

mod campaign;
mod search;
pub mod seed;
mod tightness;

pub use campaign::{
    random_simplex, replay_failure, run_campaign, trial_case, CampaignConfig, CampaignResult, FailureDescriptor,
    PassFail, RatioSummary, SlackStats, TrialCase, TrialContext,
};
pub use search::{search_cor3_counterexample, Cor3Witness};
pub use tightness::{tightness_table, TightnessRow};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown theorem {0:?}")]
    UnknownTheorem(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("missing baseline: {0}")]
    MissingBaseline(String),
    #[error("y = {y} does not exceed the threshold {threshold}; no counterexample exists")]
    ConditionNotViolated { y: f64, threshold: f64 },
    #[error("replay failed: {0}")]
    Replay(String),
}
