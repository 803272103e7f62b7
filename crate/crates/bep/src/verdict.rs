//! Stability verdict JSON.

use bep_core::game::genericity::{GenericityReport, SequenceOutcome};
use bep_core::stability::{ConditionResult, KThreshold, ProbeResult, StabilityVerdict, Witness};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    /// `ordering` (removal order) or `stuck` (self-sustaining subset).
    pub kind: String,
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub holds: bool,
    pub witness: WitnessRecord,
}

impl ConditionRecord {
    fn new(c: &ConditionResult, labels: &[String]) -> Self {
        let (kind, idx) = match &c.witness {
            Witness::Ordering(o) => ("ordering", o),
            Witness::Stuck(s) => ("stuck", s),
        };
        ConditionRecord {
            holds: c.holds,
            witness: WitnessRecord { kind: kind.into(), actions: idx.iter().map(|&i| labels[i].clone()).collect() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SequenceRecord {
    pub l_max: usize,
    /// `passed`, `failed` or `skipped`.
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenericityRecord {
    pub effectively_generic: bool,
    pub strict_equilibrium: bool,
    pub unique_second_best: bool,
    pub no_weak_support_ties: bool,
    pub ties: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence_check: Option<SequenceRecord>,
}

impl From<&GenericityReport> for GenericityRecord {
    fn from(r: &GenericityReport) -> Self {
        GenericityRecord {
            effectively_generic: r.effectively_generic(),
            strict_equilibrium: r.is_strict_equilibrium,
            unique_second_best: r.unique_second_best,
            no_weak_support_ties: r.no_weak_support_ties,
            ties: r.ties.clone(),
            sequence_check: r.sequence_check.as_ref().map(|s| {
                let (outcome, detail) = match &s.outcome {
                    SequenceOutcome::Passed => ("passed", None),
                    SequenceOutcome::Failed { length, first, second } => {
                        ("failed", Some(format!("length {length}: {first} and {second} have equal sums")))
                    }
                    SequenceOutcome::Skipped { sequences } => {
                        ("skipped", Some(format!("{sequences} sequences exceed the search cap")))
                    }
                };
                SequenceRecord { l_max: s.l_max, outcome: outcome.into(), detail }
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeRecord {
    pub epsilon: f64,
    pub horizon: f64,
    pub perturbed: Vec<String>,
    /// `returned`, `escaped` or `inconclusive`.
    pub outcome: String,
    pub initial_distance: f64,
    pub final_distance: f64,
    pub max_distance: f64,
}

impl From<&ProbeResult> for ProbeRecord {
    fn from(p: &ProbeResult) -> Self {
        ProbeRecord {
            epsilon: p.epsilon,
            horizon: p.horizon,
            perturbed: p.perturbed.clone(),
            outcome: p.outcome.as_str().into(),
            initial_distance: p.initial_distance,
            final_distance: p.final_distance,
            max_distance: p.max_distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SupportMatrixRecord {
    pub index: Vec<String>,
    /// Row = supported action, column = supporter.
    pub strict: Vec<Vec<u32>>,
    pub weak: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KThresholdRecord {
    /// Smallest stable `k`.
    pub k0: usize,
    pub k_bar: usize,
    pub by_k: Vec<(usize, String)>,
    pub monotone: bool,
}

impl From<&KThreshold> for KThresholdRecord {
    fn from(t: &KThreshold) -> Self {
        KThresholdRecord {
            k0: t.k0,
            k_bar: t.k_bar,
            by_k: t.by_k.iter().map(|(k, c)| (*k, c.as_str().to_string())).collect(),
            monotone: t.monotone,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictRecord {
    pub candidate: String,
    /// `stable`, `unstable` or `indeterminate`.
    pub conclusion: String,
    pub k: usize,
    #[serde(rename = "conditionI")]
    pub condition_i: ConditionRecord,
    #[serde(rename = "conditionIPrime")]
    pub condition_i_prime: ConditionRecord,
    #[serde(rename = "conditionII")]
    pub condition_ii: ConditionRecord,
    #[serde(rename = "conditionIIPrime")]
    pub condition_ii_prime: ConditionRecord,
    pub necessity_available: bool,
    pub support_matrix: SupportMatrixRecord,
    pub spectral_radius: f64,
    pub jacobian_max_real_eig: f64,
    pub genericity: GenericityRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeRecord>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_threshold: Option<KThresholdRecord>,
}

impl From<&StabilityVerdict> for VerdictRecord {
    fn from(v: &StabilityVerdict) -> Self {
        let labels = &v.matrix.labels;
        VerdictRecord {
            candidate: v.candidate.clone(),
            conclusion: v.conclusion.as_str().into(),
            k: v.k,
            condition_i: ConditionRecord::new(&v.condition_i, labels),
            condition_i_prime: ConditionRecord::new(&v.condition_i_prime, labels),
            condition_ii: ConditionRecord::new(&v.condition_ii, labels),
            condition_ii_prime: ConditionRecord::new(&v.condition_ii_prime, labels),
            necessity_available: v.necessity_available,
            support_matrix: SupportMatrixRecord {
                index: labels.clone(),
                strict: v.matrix.strict.clone(),
                weak: v.matrix.weak.clone(),
            },
            spectral_radius: v.spectral.spectral_radius,
            jacobian_max_real_eig: v.jacobian_eigen_max_real,
            genericity: (&v.genericity).into(),
            probe: v.epsilon_probe.as_ref().map(Into::into),
            notes: v.notes.clone(),
            k_threshold: None,
        }
    }
}
