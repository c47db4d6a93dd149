use pmcda::mapping::{map_linear_weights, MappedWeights};
use pmcda::{Model, WeightSet};
use serde::Serialize;

use crate::output::{print_json, warn, Result};
use crate::MapWeightsArgs;

#[derive(Serialize)]
struct Mapped {
    model: Model,
    weights: Vec<f64>,
    interaction_mass: f64,
    floored: Vec<usize>,
}

impl From<MappedWeights<f64>> for Mapped {
    fn from(m: MappedWeights<f64>) -> Self {
        Mapped {
            model: m.weights.model(),
            weights: m.weights.weights().to_vec(),
            interaction_mass: m.weights.interaction_mass(),
            floored: m.floored,
        }
    }
}

pub fn run(args: &MapWeightsArgs) -> Result<()> {
    let linear = WeightSet::linear_rounded(args.weights.clone())?;
    let targets = match args.model {
        Some(m) => vec![m],
        None => Model::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for target in targets {
        let m = map_linear_weights(&linear, target, args.c)?;
        for &j in &m.floored {
            warn(&format!(
                "multi-linear weight {} would be {} and was set to 0",
                j + 1,
                args.weights[j] - args.c / args.weights.len() as f64
            ));
        }
        out.push(Mapped::from(m));
    }
    print_json(&out)
}
