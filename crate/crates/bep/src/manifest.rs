//! Run manifest of a finite-population simulation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub seed: u64,
    #[serde(rename = "N")]
    pub n_agents: usize,
    #[serde(rename = "R")]
    pub revisions: u64,
    pub k: usize,
    pub tie: String,
    #[serde(rename = "game-hash")]
    pub game_hash: String,
    pub record_every: u64,
    pub init: Vec<f64>,
    pub terminal_state: Vec<f64>,
    /// Max-norm gap to the mean dynamic over the shared time range, when compared.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deviation: Option<f64>,
}
