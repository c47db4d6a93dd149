//! Trial datasets: criteria with linear weights, arms with binomial counts,
//! and optional run settings. This is the input of `assess` in both the CLI
//! and the HTTP service.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::criteria::{CriterionKind, CriterionSpec};
use crate::error::{Error, Result};
use crate::models::{Model, WeightSet};
use crate::posterior::BinomialOutcome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionEntry {
    pub name: String,
    pub kind: CriterionKind,
    pub most_preferable: f64,
    pub least_preferable: f64,
    pub linear_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmEntry {
    pub name: String,
    pub outcomes: Vec<BinomialOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub criteria: Vec<CriterionEntry>,
    pub arms: Vec<ArmEntry>,
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A dataset after validation: typed criteria, checked counts and linear weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub criteria: Vec<CriterionSpec<f64>>,
    pub linear: WeightSet<f64>,
    pub arms: Vec<Arm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub name: String,
    pub outcomes: Vec<BinomialOutcome>,
}

/// Parses JSON, reporting the path of the offending field on failure.
pub fn parse_json<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = match path.as_str() {
            "." | "?" | "" => "body".to_string(),
            _ => path,
        };
        Error::field(field, e.into_inner().to_string())
    })
}

impl Dataset {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serialises")
    }

    pub fn linear_weights(&self) -> Vec<f64> {
        self.criteria.iter().map(|c| c.linear_weight).collect()
    }

    /// Checks everything except the run settings and builds the typed problem.
    pub fn problem(&self) -> Result<Problem> {
        if self.criteria.is_empty() {
            return Err(Error::field("criteria", "at least one criterion is required"));
        }
        let mut names = HashSet::new();
        let mut criteria = Vec::with_capacity(self.criteria.len());
        for (j, c) in self.criteria.iter().enumerate() {
            if c.name.trim().is_empty() {
                return Err(Error::field(format!("criteria[{j}].name"), "name is empty"));
            }
            if !names.insert(c.name.as_str()) {
                return Err(Error::field(
                    format!("criteria[{j}].name"),
                    format!("duplicate criterion `{}`", c.name),
                ));
            }
            let spec = CriterionSpec::new(
                c.name.clone(),
                c.kind,
                c.most_preferable,
                c.least_preferable,
            )
            .map_err(|e| match e {
                Error::InvalidCriterion { reason, .. } => {
                    Error::field(format!("criteria[{j}].least_preferable"), reason)
                }
                other => other,
            })?;
            criteria.push(spec);
            let w = c.linear_weight;
            if !(w > 0.0 && w < 1.0) {
                return Err(Error::InfeasibleWeights {
                    field: format!("criteria[{j}].linear_weight"),
                    message: format!("linear weight {w} outside (0, 1)"),
                });
            }
        }
        let linear = WeightSet::linear_rounded(self.linear_weights()).map_err(|e| {
            Error::InfeasibleWeights {
                field: "criteria[].linear_weight".into(),
                message: e.to_string(),
            }
        })?;

        if self.arms.len() < 2 {
            return Err(Error::field("arms", "at least two arms are required"));
        }
        let mut arm_names = HashSet::new();
        let mut arms = Vec::with_capacity(self.arms.len());
        for (a, arm) in self.arms.iter().enumerate() {
            if arm.name.trim().is_empty() {
                return Err(Error::field(format!("arms[{a}].name"), "name is empty"));
            }
            if !arm_names.insert(arm.name.as_str()) {
                return Err(Error::field(
                    format!("arms[{a}].name"),
                    format!("duplicate arm `{}`", arm.name),
                ));
            }
            if arm.outcomes.len() != criteria.len() {
                return Err(Error::field(
                    format!("arms[{a}].outcomes"),
                    format!(
                        "expected {} outcomes (one per criterion), found {}",
                        criteria.len(),
                        arm.outcomes.len()
                    ),
                ));
            }
            for (j, o) in arm.outcomes.iter().enumerate() {
                if o.patients == 0 {
                    return Err(Error::field(
                        format!("arms[{a}].outcomes[{j}].patients"),
                        "patients must be positive",
                    ));
                }
                if o.events > o.patients {
                    return Err(Error::field(
                        format!("arms[{a}].outcomes[{j}].events"),
                        format!("{} events exceed {} patients", o.events, o.patients),
                    ));
                }
            }
            arms.push(Arm {
                name: arm.name.clone(),
                outcomes: arm.outcomes.clone(),
            });
        }
        if self.model == Model::Multilinear && criteria.len() < 2 {
            return Err(Error::InfeasibleWeights {
                field: "model".into(),
                message: "the multi-linear model needs at least two criteria".into(),
            });
        }
        Ok(Problem {
            criteria,
            linear,
            arms,
        })
    }
}
