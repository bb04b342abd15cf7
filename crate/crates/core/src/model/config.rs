use std::fmt;

use serde::{Deserialize, Serialize};

use crate::genetics::{inbreeding_coefficient, AlleleFrequency, ConsanguinityDegree, InbreedingCoefficient};
use crate::stochastic::{DiscreteDistribution, Distribution};

/// Tolerance on `sex_split.male + sex_split.female == 1`.
pub const SEX_SPLIT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    Consanguinity,
    PopulationGrowth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sex {
    #[default]
    Male,
    Female,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub interarrival: Distribution,
    /// `null` for unbounded.
    #[serde(default)]
    pub max_arrivals: Option<u64>,
}

impl SourceConfig {
    pub fn new(interarrival: Distribution, max_arrivals: Option<u64>) -> Self {
        SourceConfig {
            interarrival,
            max_arrivals,
        }
    }
}

impl Default for SourceConfig {
    fn default() -> Self {
        SourceConfig::new(Distribution::exponential(1.0), None)
    }
}

/// `WP` feeds the consanguinity model; `MP` and `FP` feed the population
/// growth submodel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Sources {
    #[serde(rename = "WP")]
    pub whole: SourceConfig,
    #[serde(rename = "MP")]
    pub male: SourceConfig,
    #[serde(rename = "FP")]
    pub female: SourceConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SexSplit {
    pub male: f64,
    pub female: f64,
}

impl Default for SexSplit {
    fn default() -> Self {
        SexSplit {
            male: 0.595,
            female: 0.405,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchWeights {
    pub consanguineous: f64,
    pub non_consanguineous: f64,
}

impl BranchWeights {
    /// Long-run share of the consanguineous branch.
    pub fn consanguineous_fraction(&self) -> f64 {
        self.consanguineous / (self.consanguineous + self.non_consanguineous)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutingWeights {
    pub male: BranchWeights,
    pub female: BranchWeights,
}

impl Default for RoutingWeights {
    fn default() -> Self {
        RoutingWeights {
            male: BranchWeights {
                consanguineous: 35.7,
                non_consanguineous: 65.9,
            },
            female: BranchWeights {
                consanguineous: 35.7,
                non_consanguineous: 64.2,
            },
        }
    }
}

/// Free-text experimental-frame labels. They are echoed into results and
/// have no effect on the dynamics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Metadata {
    pub region: Option<String>,
    pub religion: Option<String>,
    pub commitment: Option<String>,
    pub time_unit: String,
    /// Stated consanguineous-union rate. Informational: the routing weights
    /// are what the model executes.
    pub consanguineous_union_rate: Option<f64>,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            region: Some("Saudi Arabia".into()),
            religion: None,
            commitment: None,
            time_unit: "year".into(),
            consanguineous_union_rate: Some(0.30),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub model: ModelKind,
    pub sources: Sources,
    pub sex_split: SexSplit,
    pub routing: RoutingWeights,
    /// Which sex enters each marriage combiner as the parent; the other
    /// enters as the batched member.
    pub combiner_parent: Sex,
    pub offspring_distribution: DiscreteDistribution,
    pub allele_frequency: f64,
    pub consanguinity_degree: ConsanguinityDegree,
    /// Overrides the coefficient implied by `consanguinity_degree`.
    pub inbreeding_f: Option<f64>,
    pub service_time: Distribution,
    pub travel_time: f64,
    pub run_length: f64,
    pub replications: u64,
    pub base_seed: u64,
    pub metadata: Metadata,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            model: ModelKind::Consanguinity,
            sources: Sources::default(),
            sex_split: SexSplit::default(),
            routing: RoutingWeights::default(),
            combiner_parent: Sex::Male,
            offspring_distribution: DiscreteDistribution::offspring_default(),
            allele_frequency: 0.01,
            consanguinity_degree: ConsanguinityDegree::FirstCousin,
            inbreeding_f: None,
            service_time: Distribution::constant(0.0),
            travel_time: 0.0,
            run_length: 10_000.0,
            replications: 10,
            base_seed: 20_240_601,
            metadata: Metadata::default(),
        }
    }
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Coefficient applied to consanguineous births.
    pub fn consanguineous_inbreeding(&self) -> Option<InbreedingCoefficient> {
        match self.inbreeding_f {
            Some(f) => InbreedingCoefficient::new(f).ok(),
            None => Some(inbreeding_coefficient(self.consanguinity_degree)),
        }
    }

    pub fn allele(&self) -> Option<AlleleFrequency> {
        AlleleFrequency::new(self.allele_frequency).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub field: String,
    pub constraint: String,
    pub observed: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (observed {})", self.field, self.constraint, self.observed)
    }
}

/// All invariant violations in `config`; empty when it is usable.
pub fn validate_config(config: &ModelConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |field: &str, constraint: &str, observed: String| {
        out.push(Violation {
            field: field.into(),
            constraint: constraint.into(),
            observed,
        })
    };

    let split = config.sex_split;
    for (field, v) in [("sex_split.male", split.male), ("sex_split.female", split.female)] {
        if !(0.0..=1.0).contains(&v) {
            push(field, "must lie in [0, 1]", v.to_string());
        }
    }
    let sum = split.male + split.female;
    if sum.is_nan() || (sum - 1.0).abs() > SEX_SPLIT_TOLERANCE {
        push(
            "sex_split",
            "sum ≠ 1",
            format!("{} + {} = {sum}", split.male, split.female),
        );
    }

    let weights = [
        ("routing.male.consanguineous", config.routing.male.consanguineous),
        ("routing.male.non_consanguineous", config.routing.male.non_consanguineous),
        ("routing.female.consanguineous", config.routing.female.consanguineous),
        ("routing.female.non_consanguineous", config.routing.female.non_consanguineous),
    ];
    for (field, w) in weights {
        if !(w > 0.0 && w.is_finite()) {
            push(field, "must be a positive finite weight", w.to_string());
        }
    }

    for (field, source) in [
        ("sources.WP", &config.sources.whole),
        ("sources.MP", &config.sources.male),
        ("sources.FP", &config.sources.female),
    ] {
        if let Err(e) = source.interarrival.check() {
            push(&format!("{field}.interarrival"), "must be a valid distribution", e.to_string());
        } else if !source.interarrival.is_non_negative() {
            push(
                &format!("{field}.interarrival"),
                "samples must be non-negative",
                format!("{:?}", source.interarrival),
            );
        }
    }

    if let Err(e) = config.service_time.check() {
        push("service_time", "must be a valid distribution", e.to_string());
    } else if !config.service_time.is_non_negative() {
        push("service_time", "samples must be non-negative", format!("{:?}", config.service_time));
    }
    if !(config.travel_time >= 0.0 && config.travel_time.is_finite()) {
        push("travel_time", "must be finite and ≥ 0", config.travel_time.to_string());
    }
    if let Some(&(v, _)) = config.offspring_distribution.entries().iter().find(|(v, _)| *v < 0) {
        push("offspring_distribution", "values must be non-negative", v.to_string());
    }
    if !(0.0..=1.0).contains(&config.allele_frequency) {
        push("allele_frequency", "must lie in [0, 1]", config.allele_frequency.to_string());
    }
    if let Some(f) = config.inbreeding_f {
        if !(0.0..=1.0).contains(&f) {
            push("inbreeding_f", "must lie in [0, 1]", f.to_string());
        }
    }
    if !(config.run_length > 0.0 && config.run_length.is_finite()) {
        push("run_length", "must be finite and > 0", config.run_length.to_string());
    }
    if config.replications < 1 {
        push("replications", "must be ≥ 1", config.replications.to_string());
    }
    out
}
