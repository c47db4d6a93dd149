//! End-to-end assessment of a dataset: posterior draws per arm and criterion,
//! mapped weights, and pairwise recommendation probabilities.

use serde::{Deserialize, Serialize};

use crate::comparison::{
    score_samples, tally_scores, ComparisonResult, PvfSamples, Threshold,
};
use crate::criteria::CriterionSpec;
use crate::dataset::{Dataset, Problem};
use crate::error::{Error, Result};
use crate::mapping::{map_linear_weights, MappedWeights};
use crate::models::{Model, WeightSet};
use crate::posterior::{draw_samples_with, BetaPosterior};
use crate::rng::substream;
use crate::stats::Summary;

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_INTERACTION_MASS: f64 = 0.2;
pub const DEFAULT_SEED: u64 = 1;
/// Below this many draws the credible intervals and probabilities are too noisy to report.
pub const LOW_SAMPLE_WARNING: usize = 10_000;

const POSTERIOR_STREAM: u64 = 0x5041_5253; // arm/criterion draws

pub type AssessRequest = Dataset;

/// Run settings with every default filled in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub model: Model,
    pub interaction_mass: f64,
    pub psi: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub max_samples: Option<usize>,
}

impl ResolvedConfig {
    pub fn resolve(d: &Dataset, limits: Limits) -> Result<Self> {
        let c = d.interaction_mass.unwrap_or(DEFAULT_INTERACTION_MASS);
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::field("interaction_mass", format!("{c} outside [0, 1]")));
        }
        let psi = Threshold::new(d.psi.unwrap_or(Threshold::DEFAULT.value()))?.value();
        let samples = d.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(Error::field("samples", "at least one sample is required"));
        }
        if let Some(cap) = limits.max_samples {
            if samples > cap {
                return Err(Error::field("samples", format!("{samples} exceeds the cap of {cap}")));
            }
        }
        Ok(Self {
            model: d.model,
            interaction_mass: c,
            psi,
            samples,
            seed: d.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

/// Posterior draws of one arm: raw performances and their partial values.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmDraws {
    pub name: String,
    pub posteriors: Vec<BetaPosterior>,
    pub performance: Vec<Vec<f64>>,
    pub pvf: PvfSamples,
}

/// Draws `m` posterior samples for every arm and criterion. Each
/// (arm, criterion) pair has its own stream, so every model and weight
/// scenario sees the same draws for a given seed.
pub fn draw_arms(problem: &Problem, m: usize, seed: u64) -> Result<Vec<ArmDraws>> {
    problem
        .arms
        .iter()
        .enumerate()
        .map(|(a, arm)| {
            let mut posteriors = Vec::with_capacity(arm.outcomes.len());
            let mut performance = Vec::with_capacity(arm.outcomes.len());
            let mut pvf = Vec::with_capacity(arm.outcomes.len());
            for (j, (o, spec)) in arm.outcomes.iter().zip(&problem.criteria).enumerate() {
                let p = BetaPosterior::from_counts(*o)?;
                let mut rng = substream(seed, &[POSTERIOR_STREAM, a as u64, j as u64]);
                let xs = draw_samples_with(&p, m, &mut rng);
                pvf.push(xs.iter().map(|&x| spec.partial_value(x)).collect());
                posteriors.push(p);
                performance.push(xs);
            }
            Ok(ArmDraws {
                name: arm.name.clone(),
                posteriors,
                performance,
                pvf: PvfSamples::new(pvf)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionSummary {
    pub criterion: String,
    pub events: u32,
    pub patients: u32,
    pub alpha: f64,
    pub beta: f64,
    pub performance: Summary,
    pub partial_value: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmSummary {
    pub arm: String,
    pub criteria: Vec<CriterionSummary>,
}

pub fn summarize_draws(problem: &Problem, draws: &[ArmDraws]) -> Vec<ArmSummary> {
    draws
        .iter()
        .zip(&problem.arms)
        .map(|(d, arm)| ArmSummary {
            arm: d.name.clone(),
            criteria: problem
                .criteria
                .iter()
                .enumerate()
                .map(|(j, spec)| CriterionSummary {
                    criterion: spec.name().to_string(),
                    events: arm.outcomes[j].events,
                    patients: arm.outcomes[j].patients,
                    alpha: d.posteriors[j].a(),
                    beta: d.posteriors[j].b(),
                    performance: Summary::of(&d.performance[j]),
                    partial_value: Summary::of(d.pvf.column(j)),
                })
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairComparison {
    pub arm_i: String,
    pub arm_h: String,
    #[serde(flatten)]
    pub result: ComparisonResult,
}

/// Compares every ordered pair `i < h` in arm order.
pub fn compare_arms(
    draws: &[ArmDraws],
    weights: &WeightSet<f64>,
    psi: Threshold,
) -> Result<Vec<PairComparison>> {
    let scores = draws
        .iter()
        .map(|d| score_samples(&d.pvf, weights))
        .collect::<Result<Vec<_>>>()?;
    let flavor = weights.model().flavor();
    let mut out = Vec::new();
    for i in 0..draws.len() {
        for h in i + 1..draws.len() {
            let t = tally_scores(&scores[i], &scores[h], flavor)?;
            out.push(PairComparison {
                arm_i: draws[i].name.clone(),
                arm_h: draws[h].name.clone(),
                result: ComparisonResult::from_tally(t, psi),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssessResponse {
    pub config: ResolvedConfig,
    pub criteria: Vec<CriterionSpec<f64>>,
    pub linear_weights: Vec<f64>,
    pub weights: WeightSet<f64>,
    /// Criteria whose multi-linear weight was floored at zero.
    pub floored: Vec<String>,
    pub posteriors: Vec<ArmSummary>,
    pub comparisons: Vec<PairComparison>,
    pub warnings: Vec<String>,
}

/// Maps the dataset's linear weights onto `model`.
pub fn mapped_weights(problem: &Problem, model: Model, c: f64) -> Result<MappedWeights<f64>> {
    map_linear_weights(&problem.linear, model, c).map_err(|e| Error::InfeasibleWeights {
        field: "criteria[].linear_weight".into(),
        message: e.to_string(),
    })
}

pub fn assess(d: &AssessRequest, limits: Limits) -> Result<AssessResponse> {
    let config = ResolvedConfig::resolve(d, limits)?;
    let problem = d.problem()?;
    let mapped = mapped_weights(&problem, config.model, config.interaction_mass)?;
    let draws = draw_arms(&problem, config.samples, config.seed)?;
    let psi = Threshold::new(config.psi)?;
    let comparisons = compare_arms(&draws, &mapped.weights, psi)?;

    let floored: Vec<String> = mapped
        .floored
        .iter()
        .map(|&j| problem.criteria[j].name().to_string())
        .collect();
    let mut warnings = Vec::new();
    if config.samples < LOW_SAMPLE_WARNING {
        warnings.push(format!(
            "only {} posterior samples; estimates will be noisy (use at least {LOW_SAMPLE_WARNING})",
            config.samples
        ));
    }
    for name in &floored {
        warnings.push(format!(
            "multi-linear weight of `{name}` would be negative and was set to 0"
        ));
    }
    Ok(AssessResponse {
        config,
        criteria: problem.criteria.clone(),
        linear_weights: problem.linear.weights().to_vec(),
        weights: mapped.weights,
        floored,
        posteriors: summarize_draws(&problem, &draws),
        comparisons,
        warnings,
    })
}
