//! Recommendation probabilities from paired posterior samples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    difference, linear_kernel, multilinear_kernel, product_kernel, slos_kernel, Flavor, Model,
    WeightSet,
};

/// Confidence level `psi` in `[0.5, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub const DEFAULT: Threshold = Threshold(0.8);

    pub fn new(psi: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&psi) {
            return Err(Error::field("psi", format!("threshold {psi} outside [0.5, 1]")));
        }
        Ok(Self(psi))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl TryFrom<f64> for Threshold {
    type Error = Error;

    fn try_from(psi: f64) -> Result<Self> {
        Self::new(psi)
    }
}

impl From<Threshold> for f64 {
    fn from(t: Threshold) -> f64 {
        t.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    RecommendI,
    RecommendH,
    Neither,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::RecommendI => "recommend_i",
            Decision::RecommendH => "recommend_h",
            Decision::Neither => "neither",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// `recommend_i` above `psi`, `recommend_h` below `1 - psi`.
pub fn decide(probability: f64, psi: Threshold) -> Decision {
    if probability > psi.0 {
        Decision::RecommendI
    } else if probability < 1.0 - psi.0 {
        Decision::RecommendH
    } else {
        Decision::Neither
    }
}

/// Per-draw win counts for arm `i` against arm `h`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub wins_i: usize,
    pub wins_h: usize,
    pub ties: usize,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.wins_i + self.wins_h + self.ties
    }

    pub fn probability(&self) -> f64 {
        self.wins_i as f64 / self.total() as f64
    }

    pub fn reverse_probability(&self) -> f64 {
        self.wins_h as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub probability: f64,
    pub reverse_probability: f64,
    pub ties: f64,
    pub n_samples: usize,
    pub decision: Decision,
    pub threshold: Threshold,
}

impl ComparisonResult {
    pub fn from_tally(t: Tally, psi: Threshold) -> Self {
        let probability = t.probability();
        Self {
            probability,
            reverse_probability: t.reverse_probability(),
            ties: t.ties as f64 / t.total() as f64,
            n_samples: t.total(),
            decision: decide(probability, psi),
            threshold: psi,
        }
    }
}

/// Partial values of one arm, one column of `m` draws per criterion.
/// Draw `k` of every column forms one joint sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PvfSamples {
    columns: Vec<Vec<f64>>,
}

impl PvfSamples {
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = columns.first() {
            for c in &columns[1..] {
                if c.len() != first.len() {
                    return Err(Error::SampleCountMismatch {
                        first: first.len(),
                        second: c.len(),
                    });
                }
            }
        }
        Ok(Self { columns })
    }

    pub fn n_criteria(&self) -> usize {
        self.columns.len()
    }

    pub fn n_samples(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }
}

/// Scores every joint draw in the model's native flavor.
pub fn score_samples(s: &PvfSamples, w: &WeightSet<f64>) -> Result<Vec<f64>> {
    if s.n_criteria() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: s.n_criteria(),
        });
    }
    let weights = w.weights();
    let per_term = w.interaction_coefficient();
    let mut row = vec![0.0; s.n_criteria()];
    let mut out = Vec::with_capacity(s.n_samples());
    for k in 0..s.n_samples() {
        for (j, col) in s.columns.iter().enumerate() {
            row[j] = col[k];
        }
        out.push(match w.model() {
            Model::Linear => linear_kernel(&row, weights),
            Model::Product => product_kernel(&row, weights),
            Model::Multilinear => multilinear_kernel(&row, weights, per_term),
            Model::Slos => slos_kernel(&row, weights),
        });
    }
    Ok(out)
}

/// Counts strict wins of `scores_i` over `scores_h`, draw by draw.
pub fn tally_scores(scores_i: &[f64], scores_h: &[f64], flavor: Flavor) -> Result<Tally> {
    if scores_i.len() != scores_h.len() {
        return Err(Error::SampleCountMismatch {
            first: scores_i.len(),
            second: scores_h.len(),
        });
    }
    if scores_i.is_empty() {
        return Err(Error::field("samples", "no samples to compare"));
    }
    let mut t = Tally::default();
    for (&a, &b) in scores_i.iter().zip(scores_h) {
        let d = difference(a, b);
        let i_better = match flavor {
            Flavor::Utility => d > 0.0,
            Flavor::Loss => d < 0.0,
        };
        let h_better = match flavor {
            Flavor::Utility => d < 0.0,
            Flavor::Loss => d > 0.0,
        };
        if i_better {
            t.wins_i += 1;
        } else if h_better {
            t.wins_h += 1;
        } else {
            t.ties += 1;
        }
    }
    Ok(t)
}

/// Estimates the probability that arm `i` scores strictly better than arm `h`.
pub fn comparison_probability(
    samples_i: &PvfSamples,
    samples_h: &PvfSamples,
    w: &WeightSet<f64>,
    psi: Threshold,
) -> Result<ComparisonResult> {
    if samples_i.n_samples() != samples_h.n_samples() {
        return Err(Error::SampleCountMismatch {
            first: samples_i.n_samples(),
            second: samples_h.n_samples(),
        });
    }
    let si = score_samples(samples_i, w)?;
    let sh = score_samples(samples_h, w)?;
    let t = tally_scores(&si, &sh, w.model().flavor())?;
    Ok(ComparisonResult::from_tally(t, psi))
}
