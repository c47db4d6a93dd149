//! Simulation harness: two-arm, two-criterion trials over a grid of true
//! event probabilities, scored by all four models on shared posterior draws.
//!
//! Every trial draws from its own stream addressed by
//! `(scenario, cell, trial, arm, purpose)` under the master seed. The target
//! correlation is not part of the address, so runs at different `rho` share
//! random numbers and differences between them are not pure noise.

use std::io::Write;

use rand_distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::Threshold;
use crate::correlated::{CorrelatedBernoulli, CorrelationClamp};
use crate::error::{Error, Result};
use crate::mapping::map_linear_weights;
use crate::models::{
    difference, linear_kernel, multilinear_kernel, product_kernel, slos_kernel, Model, WeightSet,
};
use crate::posterior::BetaPosterior;
use crate::rng::substream;

/// True `(benefit, risk)` event probabilities of the reference arm T1.
pub const T1_PROFILES: [(f64, f64); 9] = [
    (0.5, 0.5),
    (0.3, 0.7),
    (0.7, 0.3),
    (0.1, 0.1),
    (0.9, 0.9),
    (0.3, 0.3),
    (0.7, 0.7),
    (0.9, 0.1),
    (0.1, 0.9),
];

pub const T2_VALUES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Ordered model pairs `(X, Y)` for `phi = P_X - P_Y`.
pub const PHI_PAIRS: [(Model, Model); 6] = [
    (Model::Product, Model::Linear),
    (Model::Multilinear, Model::Linear),
    (Model::Multilinear, Model::Product),
    (Model::Slos, Model::Linear),
    (Model::Slos, Model::Product),
    (Model::Slos, Model::Multilinear),
];

pub fn model_code(m: Model) -> &'static str {
    match m {
        Model::Linear => "L",
        Model::Product => "P",
        Model::Multilinear => "ML",
        Model::Slos => "S",
    }
}

pub fn pair_label((x, y): (Model, Model)) -> String {
    format!("{}-{}", model_code(x), model_code(y))
}

const SIM_STREAM: u64 = 0x5349_4d55;
const COUNTS: u64 = 0;
const DRAWS: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioGrid {
    pub t1_profiles: Vec<(f64, f64)>,
    pub t2_values: Vec<f64>,
    pub n_patients: u32,
    pub n_posterior_samples: usize,
    pub n_trials: usize,
    pub psi: Threshold,
    pub interaction_mass: f64,
}

impl Default for ScenarioGrid {
    fn default() -> Self {
        Self {
            t1_profiles: T1_PROFILES.to_vec(),
            t2_values: T2_VALUES.to_vec(),
            n_patients: 100,
            n_posterior_samples: 2000,
            n_trials: 2500,
            psi: Threshold::DEFAULT,
            interaction_mass: 0.2,
        }
    }
}

impl ScenarioGrid {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |t: f64| t > 0.0 && t < 1.0;
        for (i, &(b, r)) in self.t1_profiles.iter().enumerate() {
            if !in_unit(b) || !in_unit(r) {
                return Err(Error::field(format!("t1_profiles[{i}]"), "probabilities must lie in (0, 1)"));
            }
        }
        if self.t2_values.is_empty() || !self.t2_values.iter().all(|&t| in_unit(t)) {
            return Err(Error::field("t2_values", "probabilities must lie in (0, 1)"));
        }
        if self.n_patients == 0 {
            return Err(Error::field("patients", "must be positive"));
        }
        if self.n_posterior_samples == 0 {
            return Err(Error::field("posterior_samples", "must be positive"));
        }
        if self.n_trials == 0 {
            return Err(Error::field("trials", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.interaction_mass) {
            return Err(Error::field("interaction_mass", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn n_cells(&self) -> usize {
        self.t2_values.len() * self.t2_values.len()
    }

    /// `(benefit, risk)` of T2 in cell `cell`; benefit varies fastest.
    pub fn t2_profile(&self, cell: usize) -> (f64, f64) {
        let k = self.t2_values.len();
        (self.t2_values[cell % k], self.t2_values[cell / k])
    }

    /// Equal weights for every model: linear `(0.5, 0.5)` mapped onto the others.
    pub fn model_weights(&self) -> Result<[WeightSet<f64>; 4]> {
        let linear = WeightSet::linear(vec![0.5, 0.5])?;
        let map = |m| map_linear_weights(&linear, m, self.interaction_mass).map(|w| w.weights);
        Ok([
            map(Model::Linear)?,
            map(Model::Product)?,
            map(Model::Multilinear)?,
            map(Model::Slos)?,
        ])
    }
}

/// `P(T1 better than T2)` under each model, indexed by [`Model::index`].
pub type ModelProbabilities = [f64; 4];

/// Reusable buffers for one worker.
#[derive(Default)]
struct Scratch {
    benefit: [Vec<f64>; 2],
    risk: [Vec<f64>; 2],
    scores: [Vec<f64>; 2],
}

#[allow(clippy::too_many_arguments)]
fn draw_arm_pvf(
    gen: &CorrelatedBernoulli,
    n_patients: u32,
    m: usize,
    seed: u64,
    address: [u64; 3],
    arm: u64,
    benefit: &mut Vec<f64>,
    risk_value: &mut Vec<f64>,
) -> Result<()> {
    let [s, c, t] = address;
    let mut rng = substream(seed, &[SIM_STREAM, s, c, t, arm, COUNTS]);
    let counts = gen.sample_counts(n_patients, &mut rng);
    let post_b = BetaPosterior::new(f64::from(counts.first), f64::from(n_patients - counts.first))?;
    let post_r = BetaPosterior::new(f64::from(counts.second), f64::from(n_patients - counts.second))?;
    let mut rng = substream(seed, &[SIM_STREAM, s, c, t, arm, DRAWS]);
    let sb = post_b.sampler();
    let sr = post_r.sampler();
    benefit.clear();
    risk_value.clear();
    benefit.extend((0..m).map(|_| sb.sample(&mut rng)));
    // PVF of the risk criterion is 1 - theta
    risk_value.extend((0..m).map(|_| 1.0 - sr.sample(&mut rng)));
    Ok(())
}

fn score_pair(w: &WeightSet<f64>, b: &[f64], r: &[f64], out: &mut Vec<f64>) {
    let weights = w.weights();
    let per_term = w.interaction_coefficient();
    out.clear();
    out.extend(b.iter().zip(r).map(|(&x, &y)| {
        let u = [x, y];
        match w.model() {
            Model::Linear => linear_kernel(&u, weights),
            Model::Product => product_kernel(&u, weights),
            Model::Multilinear => multilinear_kernel(&u, weights, per_term),
            Model::Slos => slos_kernel(&u, weights),
        }
    }));
}

fn win_fraction(model: Model, s1: &[f64], s2: &[f64]) -> f64 {
    let wins = s1
        .iter()
        .zip(s2)
        .filter(|(&a, &b)| {
            let d = difference(a, b);
            match model {
                Model::Slos => d < 0.0,
                _ => d > 0.0,
            }
        })
        .count();
    wins as f64 / s1.len() as f64
}

fn simulate_trial_with(
    gens: &[CorrelatedBernoulli; 2],
    weights: &[WeightSet<f64>; 4],
    n_patients: u32,
    m: usize,
    seed: u64,
    address: [u64; 3],
    scratch: &mut Scratch,
) -> Result<ModelProbabilities> {
    for (arm, gen) in gens.iter().enumerate() {
        let (b, r) = (&mut scratch.benefit[arm], &mut scratch.risk[arm]);
        draw_arm_pvf(gen, n_patients, m, seed, address, arm as u64, b, r)?;
    }
    let mut out = [0.0; 4];
    for w in weights {
        for arm in 0..2 {
            score_pair(w, &scratch.benefit[arm], &scratch.risk[arm], &mut scratch.scores[arm]);
        }
        out[w.model().index()] = win_fraction(w.model(), &scratch.scores[0], &scratch.scores[1]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialSpec {
    pub theta1: (f64, f64),
    pub theta2: (f64, f64),
    pub n_patients: u32,
    pub posterior_samples: usize,
    pub rho: f64,
    pub interaction_mass: f64,
}

/// One simulated two-arm trial: counts, Beta posteriors, posterior draws and
/// the probability that T1 beats T2 under every model on the same draws.
pub fn simulate_trial(spec: &TrialSpec, seed: u64) -> Result<ModelProbabilities> {
    let grid = ScenarioGrid {
        interaction_mass: spec.interaction_mass,
        ..ScenarioGrid::default()
    };
    let gens = [
        CorrelatedBernoulli::new(spec.theta1.0, spec.theta1.1, spec.rho)?,
        CorrelatedBernoulli::new(spec.theta2.0, spec.theta2.1, spec.rho)?,
    ];
    simulate_trial_with(
        &gens,
        &grid.model_weights()?,
        spec.n_patients,
        spec.posterior_samples,
        seed,
        [0, 0, 0],
        &mut Scratch::default(),
    )
}

/// Recommendation counts for one (scenario, T2 cell).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    /// 1-based scenario number.
    pub scenario: usize,
    pub cell: usize,
    pub theta1: (f64, f64),
    pub theta2: (f64, f64),
    pub trials: usize,
    /// Trials with `P > psi`, per model.
    pub rec_t1: [u32; 4],
    /// Trials with `P < 1 - psi`, per model.
    pub rec_t2: [u32; 4],
    /// Correlation clamps applied to (T1, T2) generators, if any.
    pub clamps: [Option<CorrelationClamp>; 2],
}

impl CellResult {
    pub fn p_rec_t1(&self, m: Model) -> f64 {
        f64::from(self.rec_t1[m.index()]) / self.trials as f64
    }

    pub fn p_rec_t2(&self, m: Model) -> f64 {
        f64::from(self.rec_t2[m.index()]) / self.trials as f64
    }

    pub fn phi(&self, x: Model, y: Model) -> f64 {
        self.p_rec_t1(x) - self.p_rec_t1(y)
    }
}

/// Runs all trials of one cell. `scenario` is a 0-based index into the T1 profiles.
pub fn run_cell(grid: &ScenarioGrid, scenario: usize, cell: usize, rho: f64, seed: u64) -> Result<CellResult> {
    let weights = grid.model_weights()?;
    run_cell_with(grid, &weights, scenario, cell, rho, seed)
}

fn run_cell_with(
    grid: &ScenarioGrid,
    weights: &[WeightSet<f64>; 4],
    scenario: usize,
    cell: usize,
    rho: f64,
    seed: u64,
) -> Result<CellResult> {
    let theta1 = grid.t1_profiles[scenario];
    let theta2 = grid.t2_profile(cell);
    let g1 = CorrelatedBernoulli::new(theta1.0, theta1.1, rho)?;
    let g2 = CorrelatedBernoulli::new(theta2.0, theta2.1, rho)?;
    let clamps = [g1.clamp(), g2.clamp()];
    let gens = [g1, g2];
    let psi = grid.psi.value();
    let mut rec_t1 = [0u32; 4];
    let mut rec_t2 = [0u32; 4];
    let mut scratch = Scratch::default();
    for trial in 0..grid.n_trials {
        let p = simulate_trial_with(
            &gens,
            weights,
            grid.n_patients,
            grid.n_posterior_samples,
            seed,
            [scenario as u64, cell as u64, trial as u64],
            &mut scratch,
        )?;
        for k in 0..4 {
            rec_t1[k] += u32::from(p[k] > psi);
            rec_t2[k] += u32::from(p[k] < 1.0 - psi);
        }
    }
    Ok(CellResult {
        scenario: scenario + 1,
        cell,
        theta1,
        theta2,
        trials: grid.n_trials,
        rec_t1,
        rec_t2,
        clamps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub rho: f64,
    pub seed: u64,
    pub cells: Vec<CellResult>,
}

/// Runs every cell of the given 0-based scenarios in parallel. The result
/// order is (scenario, cell) regardless of scheduling.
pub fn run_grid(grid: &ScenarioGrid, scenarios: &[usize], rho: f64, seed: u64) -> Result<GridResult> {
    grid.validate()?;
    for &s in scenarios {
        if s >= grid.t1_profiles.len() {
            return Err(Error::field("scenario", format!("no scenario {}", s + 1)));
        }
    }
    let weights = grid.model_weights()?;
    let work: Vec<(usize, usize)> = scenarios
        .iter()
        .flat_map(|&s| (0..grid.n_cells()).map(move |c| (s, c)))
        .collect();
    let cells = work
        .par_iter()
        .map(|&(s, c)| run_cell_with(grid, &weights, s, c, rho, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridResult { rho, seed, cells })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    /// Scenario number, or `all` for the total.
    pub scenario_id: String,
    pub model: Model,
    pub rho: f64,
    pub count_2_5: usize,
    pub count_5: usize,
    pub total: usize,
}

/// Counts cells whose T1-recommendation probability moved by at least 2.5%
/// and 5% between `base` (uncorrelated) and `correlated`.
pub fn sensitivity_counts(base: &GridResult, correlated: &GridResult) -> Result<Vec<SensitivityRow>> {
    if base.cells.len() != correlated.cells.len() {
        return Err(Error::field("grid", "runs cover different cells"));
    }
    let mut scenarios: Vec<usize> = base.cells.iter().map(|c| c.scenario).collect();
    scenarios.dedup();
    let mut rows = Vec::new();
    let mut totals = [(0usize, 0usize, 0usize); 4];
    for &s in &scenarios {
        for m in Model::ALL {
            let (mut c25, mut c5, mut n) = (0, 0, 0);
            for (a, b) in base.cells.iter().zip(&correlated.cells) {
                if a.scenario != s {
                    continue;
                }
                if a.scenario != b.scenario || a.cell != b.cell || a.trials != b.trials {
                    return Err(Error::field("grid", "runs are not aligned cell by cell"));
                }
                // integer comparison: |dk| / T >= 0.025  <=>  40 |dk| >= T
                let dk = a.rec_t1[m.index()].abs_diff(b.rec_t1[m.index()]) as usize;
                c25 += usize::from(40 * dk >= a.trials);
                c5 += usize::from(20 * dk >= a.trials);
                n += 1;
            }
            let t = &mut totals[m.index()];
            t.0 += c25;
            t.1 += c5;
            t.2 += n;
            rows.push(SensitivityRow {
                scenario_id: s.to_string(),
                model: m,
                rho: correlated.rho,
                count_2_5: c25,
                count_5: c5,
                total: n,
            });
        }
    }
    for m in Model::ALL {
        let t = totals[m.index()];
        rows.push(SensitivityRow {
            scenario_id: "all".into(),
            model: m,
            rho: correlated.rho,
            count_2_5: t.0,
            count_5: t.1,
            total: t.2,
        });
    }
    Ok(rows)
}

/// Runs the grid at `rho = 0` and at `rho` with common random numbers and compares.
pub fn correlation_sensitivity(
    grid: &ScenarioGrid,
    scenarios: &[usize],
    rho: f64,
    seed: u64,
) -> Result<Vec<SensitivityRow>> {
    let base = run_grid(grid, scenarios, 0.0, seed)?;
    let corr = run_grid(grid, scenarios, rho, seed)?;
    sensitivity_counts(&base, &corr)
}

pub fn write_recommendations<W: Write>(cells: &[CellResult], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["scenario_id", "theta2_benefit", "theta2_risk", "model", "p_rec_t1", "p_rec_t2"])?;
    for c in cells {
        for m in Model::ALL {
            wtr.write_record([
                c.scenario.to_string(),
                c.theta2.0.to_string(),
                c.theta2.1.to_string(),
                m.to_string(),
                c.p_rec_t1(m).to_string(),
                c.p_rec_t2(m).to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_phi<W: Write>(cells: &[CellResult], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["scenario_id", "theta2_benefit", "theta2_risk", "pair", "phi"])?;
    for c in cells {
        for pair in PHI_PAIRS {
            wtr.write_record([
                c.scenario.to_string(),
                c.theta2.0.to_string(),
                c.theta2.1.to_string(),
                pair_label(pair),
                c.phi(pair.0, pair.1).to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_sensitivity<W: Write>(rows: &[SensitivityRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["scenario_id", "model", "rho", "count_2_5", "count_5", "total"])?;
    for r in rows {
        wtr.write_record([
            r.scenario_id.clone(),
            r.model.to_string(),
            r.rho.to_string(),
            r.count_2_5.to_string(),
            r.count_5.to_string(),
            r.total.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ScenarioGrid {
        ScenarioGrid {
            n_trials: 20,
            n_posterior_samples: 200,
            ..ScenarioGrid::default()
        }
    }

    #[test]
    fn defaults() {
        let g = ScenarioGrid::default();
        assert_eq!(g.t1_profiles.len() * g.n_cells(), 729);
        assert_eq!(g.t2_profile(0), (0.1, 0.1));
        assert_eq!(g.t2_profile(1), (0.2, 0.1));
        assert_eq!(g.t2_profile(80), (0.9, 0.9));
        let w = g.model_weights().unwrap();
        assert_eq!(w[Model::Multilinear.index()].weights(), &[0.4, 0.4]);
        assert!((w[Model::Slos.index()].weights()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dominance_gives_certainty() {
        let spec = TrialSpec {
            theta1: (0.9, 0.1),
            theta2: (0.1, 0.9),
            n_patients: 100,
            posterior_samples: 2000,
            rho: 0.0,
            interaction_mass: 0.2,
        };
        for p in simulate_trial(&spec, 9).unwrap() {
            assert!(p > 0.999, "{p}");
        }
    }

    #[test]
    fn cells_are_order_independent() {
        let g = small();
        let grid = run_grid(&g, &[3], 0.0, 4).unwrap();
        let alone = run_cell(&g, 3, 40, 0.0, 4).unwrap();
        assert_eq!(grid.cells[40], alone);
        assert_eq!(run_grid(&g, &[3], 0.0, 4).unwrap(), grid);
    }

    #[test]
    fn proportions_and_phi_bounded() {
        let g = small();
        let r = run_grid(&g, &[0], 0.0, 2).unwrap();
        for c in &r.cells {
            for m in Model::ALL {
                assert!(c.p_rec_t1(m) + c.p_rec_t2(m) <= 1.0);
                assert_eq!(c.phi(m, m), 0.0);
            }
        }
    }

    #[test]
    fn sensitivity_of_identical_runs_is_zero() {
        let g = ScenarioGrid {
            t2_values: vec![0.2, 0.8],
            ..small()
        };
        let rows = correlation_sensitivity(&g, &[0, 1], 0.0, 1).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.count_2_5 == 0 && r.count_5 == 0));
        assert_eq!(rows.last().unwrap().total, 8);
        assert_eq!(rows.last().unwrap().scenario_id, "all");
    }

    #[test]
    fn csv_headers() {
        let g = ScenarioGrid {
            t2_values: vec![0.3],
            ..small()
        };
        let r = run_grid(&g, &[0], 0.0, 1).unwrap();
        let mut buf = Vec::new();
        write_recommendations(&r.cells, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("scenario_id,theta2_benefit,theta2_risk,model,p_rec_t1,p_rec_t2\n1,0.3,0.3,linear,"));
        let mut buf = Vec::new();
        write_phi(&r.cells, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("\n1,0.3,0.3,P-L,"));
    }
}
