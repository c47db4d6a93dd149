//! Probabilistic multi-criteria decision analysis for benefit-risk assessment.
//!
//! Criteria are normalised by linear partial value functions, aggregated by
//! one of four models (linear, product, multi-linear, SLoS) and compared
//! across treatments by Monte Carlo over Beta posteriors.
//!
//! The aggregation and mapping code is generic over [`Scalar`] (`f32` or
//! `f64`); Monte Carlo code runs in `f64`.

pub mod error;
pub mod scalar;

pub mod criteria;
pub mod mapping;
pub mod models;
pub mod roots;

pub mod assess;
pub mod case_study;
pub mod comparison;
pub mod contours;
pub mod correlated;
pub mod dataset;
pub mod posterior;
pub mod rng;
pub mod sim;
pub mod stats;

pub use assess::{assess, AssessRequest, AssessResponse, Limits, ResolvedConfig};
pub use comparison::{comparison_probability, ComparisonResult, Decision, PvfSamples, Threshold};
pub use correlated::{draw_correlated_pair, CorrelatedBernoulli};
pub use criteria::{partial_value, CriterionKind, CriterionSpec};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use mapping::{
    map_linear_weights, map_to_multilinear, map_to_product, map_to_slos, map_weight_vector,
    midpoint_slope, tangent_slope, MappedWeights, MappingRequest,
};
pub use models::{
    linear_utility, multilinear_utility, product_utility, score, score_difference, slos_loss,
    to_loss, Flavor, Model, Score, WeightSet,
};
pub use posterior::{draw_samples, posterior_from_counts, BetaPosterior, BinomialOutcome};
pub use scalar::Scalar;

pub type CriterionSpec64 = CriterionSpec<f64>;
pub type CriterionSpec32 = CriterionSpec<f32>;
pub type WeightSet64 = WeightSet<f64>;
pub type WeightSet32 = WeightSet<f32>;
pub type Score64 = Score<f64>;
pub type Score32 = Score<f32>;
pub type MappedWeights64 = MappedWeights<f64>;
pub type MappedWeights32 = MappedWeights<f32>;
pub type ContourGrid64 = contours::ContourGrid<f64>;
pub type ContourGrid32 = contours::ContourGrid<f32>;
