//! The Venlafaxine / Fluoxetine / placebo depression trial.
//!
//! Two copies of the data ship with the crate. [`Variant::AsReported`] has the
//! counts exactly as printed, including 51/96 Venlafaxine responders.
//! [`Variant::Reproduction`] uses 50/96, the count consistent with the
//! published posterior summaries and recommendation probabilities; it is the
//! default for reproduction runs.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::assess::{compare_arms, draw_arms, mapped_weights, summarize_draws, ArmSummary, PairComparison};
use crate::comparison::Threshold;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::models::{Model, WeightSet};

pub const AS_REPORTED_JSON: &str = include_str!("../../../data/case_study.json");
pub const REPRODUCTION_JSON: &str = include_str!("../../../data/case_study_reproduction.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    AsReported,
    #[default]
    Reproduction,
}

pub fn dataset(variant: Variant) -> Dataset {
    let text = match variant {
        Variant::AsReported => AS_REPORTED_JSON,
        Variant::Reproduction => REPRODUCTION_JSON,
    };
    Dataset::from_json(text).expect("embedded case-study dataset is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightScenario {
    pub id: u8,
    pub linear_weights: [f64; 4],
}

pub const SCENARIOS: [WeightScenario; 3] = [
    WeightScenario {
        id: 1,
        linear_weights: [0.25, 0.25, 0.25, 0.25],
    },
    // benefit first
    WeightScenario {
        id: 2,
        linear_weights: [0.58, 0.11, 0.15, 0.15],
    },
    // safety first
    WeightScenario {
        id: 3,
        linear_weights: [0.18, 0.28, 0.25, 0.29],
    },
];

impl WeightScenario {
    pub fn get(id: u8) -> Result<Self> {
        SCENARIOS
            .iter()
            .copied()
            .find(|s| s.id == id)
            .ok_or_else(|| Error::field("scenario", format!("no weight scenario {id} (use 1, 2 or 3)")))
    }
}

impl fmt::Display for WeightScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario {}", self.id)
    }
}

impl FromStr for WeightScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = s
            .trim()
            .parse::<u8>()
            .map_err(|_| Error::field("scenario", format!("`{s}` is not a scenario number")))?;
        Self::get(id)
    }
}

/// `d` with its linear weights replaced by the scenario's.
pub fn with_scenario(d: &Dataset, scenario: WeightScenario) -> Result<Dataset> {
    if d.criteria.len() != scenario.linear_weights.len() {
        return Err(Error::DimensionMismatch {
            expected: d.criteria.len(),
            found: scenario.linear_weights.len(),
        });
    }
    let mut d = d.clone();
    for (c, &w) in d.criteria.iter_mut().zip(&scenario.linear_weights) {
        c.linear_weight = w;
    }
    Ok(d)
}

/// Posterior mean and equal-tailed 95% interval of every performance and PVF.
pub fn summarize_posteriors(d: &Dataset, m: usize, seed: u64) -> Result<Vec<ArmSummary>> {
    let problem = d.problem()?;
    let draws = draw_arms(&problem, m, seed)?;
    Ok(summarize_draws(&problem, &draws))
}

/// The three pairwise comparisons (V vs F, V vs P, F vs P) for one scenario and model.
pub fn run_case_study(
    d: &Dataset,
    scenario: WeightScenario,
    model: Model,
    m: usize,
    psi: Threshold,
    c: f64,
    seed: u64,
) -> Result<Vec<PairComparison>> {
    let problem = with_scenario(d, scenario)?.problem()?;
    let weights = mapped_weights(&problem, model, c)?.weights;
    let draws = draw_arms(&problem, m, seed)?;
    compare_arms(&draws, &weights, psi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub scenario: u8,
    pub model: Model,
    pub weights: WeightSet<f64>,
    pub floored: Vec<usize>,
    pub comparisons: Vec<PairComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseStudyReport {
    pub samples: usize,
    pub seed: u64,
    pub psi: f64,
    pub interaction_mass: f64,
    pub posteriors: Vec<ArmSummary>,
    pub results: Vec<ScenarioResult>,
}

/// Runs the requested scenarios and models on one shared set of posterior draws.
pub fn run_case_study_grid(
    d: &Dataset,
    scenarios: &[WeightScenario],
    models: &[Model],
    m: usize,
    psi: Threshold,
    c: f64,
    seed: u64,
) -> Result<CaseStudyReport> {
    let problem = d.problem()?;
    let draws = draw_arms(&problem, m, seed)?;
    let mut results = Vec::new();
    for &s in scenarios {
        let p = with_scenario(d, s)?.problem()?;
        for &model in models {
            let mapped = mapped_weights(&p, model, c)?;
            results.push(ScenarioResult {
                scenario: s.id,
                model,
                comparisons: compare_arms(&draws, &mapped.weights, psi)?,
                weights: mapped.weights,
                floored: mapped.floored,
            });
        }
    }
    Ok(CaseStudyReport {
        samples: m,
        seed,
        psi: psi.value(),
        interaction_mass: c,
        posteriors: summarize_draws(&problem, &draws),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_counts() {
        let d = dataset(Variant::AsReported);
        let counts: Vec<Vec<(u32, u32)>> = d
            .arms
            .iter()
            .map(|a| a.outcomes.iter().map(|o| (o.events, o.patients)).collect())
            .collect();
        assert_eq!(
            counts,
            vec![
                vec![(51, 96), (40, 100), (22, 100), (10, 100)],
                vec![(45, 100), (22, 102), (15, 102), (7, 102)],
                vec![(37, 101), (8, 102), (14, 102), (1, 102)],
            ]
        );
        let r = dataset(Variant::Reproduction);
        assert_eq!(r.arms[0].outcomes[0].events, 50);
        assert_eq!(r.arms[1..], d.arms[1..]);
        assert_eq!(r.criteria, d.criteria);
    }

    #[test]
    fn scenarios() {
        assert_eq!("2".parse::<WeightScenario>().unwrap().linear_weights[0], 0.58);
        assert!("4".parse::<WeightScenario>().is_err());
        assert!("x".parse::<WeightScenario>().is_err());
        for s in SCENARIOS {
            let d = with_scenario(&dataset(Variant::Reproduction), s).unwrap();
            d.problem().unwrap();
        }
    }

    #[test]
    fn grid_matches_single_runs() {
        let d = dataset(Variant::Reproduction);
        let psi = Threshold::DEFAULT;
        let grid = run_case_study_grid(&d, &SCENARIOS[1..2], &[Model::Slos], 2000, psi, 0.2, 5).unwrap();
        let single = run_case_study(&d, SCENARIOS[1], Model::Slos, 2000, psi, 0.2, 5).unwrap();
        assert_eq!(grid.results[0].comparisons, single);
    }
}
