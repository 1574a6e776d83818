//! Machine-readable run records.

use serde::{Deserialize, Serialize};

use crate::sampler::Potential;

/// Exact potential rendered for JSON: the integer itself when it fits in 63
/// bits, plus its base-2 logarithm and full decimal expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialRecord {
    #[serde(rename = "Q")]
    pub q: Option<u64>,
    #[serde(rename = "Q_log2")]
    pub q_log2: f64,
    #[serde(rename = "Q_decimal")]
    pub q_decimal: String,
}

impl From<&Potential> for PotentialRecord {
    fn from(p: &Potential) -> Self {
        PotentialRecord {
            q: p.to_u64().filter(|&q| q < 1 << 63),
            q_log2: if p.is_zero() { 0.0 } else { p.log2() },
            q_decimal: p.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundMetrics {
    pub round: usize,
    #[serde(flatten)]
    pub potential: PotentialRecord,
    pub sample_size: usize,
    pub expected_sample_size: f64,
    /// Matching size, or weight in original units.
    pub solution_value: u128,
    /// Value of the round's cover; doubled units for odd-set covers.
    pub cover_value: u128,
    /// Weighted runs: matching weight after rescaling.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rescaled_value: Option<u128>,
    /// Whether the next round's potential stayed within `(1 + eps/2)` of
    /// this one. Absent for the last round.
    pub growth_ok: Option<bool>,
    /// Importance mass this round's cover missed, in decimal; absent for
    /// the last round.
    pub uncovered_mass: Option<String>,
    /// The sample repeated the previous round's and its solution was reused.
    pub reused: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreprocessInfo {
    pub w_max: u128,
    pub threshold: u128,
    pub scale: u128,
    pub kept_edges: usize,
    #[serde(rename = "W")]
    pub total_weight: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub algorithm: String,
    pub epsilon: f64,
    pub internal_epsilon: f64,
    pub eta: u64,
    pub seed: u64,
    pub order: String,
    pub n: usize,
    pub m: usize,
    pub rounds: usize,
    pub passes_used: u64,
    pub sampling_rate: f64,
    pub best_value: u128,
    pub best_round: usize,
    pub peak_stored_edges: usize,
    pub peak_stored_bits: u64,
    pub growth_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preprocess: Option<PreprocessInfo>,
    pub per_round: Vec<RoundMetrics>,
    pub wall_time_ms: u64,
}

impl RunMetrics {
    /// JSON with `wall_time_ms` zeroed, for reproducibility comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut m = self.clone();
        m.wall_time_ms = 0;
        serde_json::to_string(&m).expect("metrics serialize")
    }
}
