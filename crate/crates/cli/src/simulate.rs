use std::fs;

use pmcda::sim::{
    run_grid, sensitivity_counts, write_phi, write_recommendations, write_sensitivity, GridResult, ScenarioGrid,
};
use pmcda::Threshold;

use crate::output::{create, warn, Result};
use crate::SimulateArgs;

pub fn run(args: &SimulateArgs) -> Result<()> {
    let grid = ScenarioGrid {
        n_patients: args.patients,
        n_posterior_samples: args.posterior_samples,
        n_trials: args.trials,
        psi: Threshold::new(args.common.psi)?,
        interaction_mass: args.common.c,
        ..ScenarioGrid::default()
    };
    grid.validate()?;
    if !(-1.0..=1.0).contains(&args.rho) {
        return Err(format!("--rho {} outside [-1, 1]", args.rho).into());
    }
    let scenarios: Vec<usize> = if args.scenarios.is_empty() {
        (0..grid.t1_profiles.len()).collect()
    } else {
        args.scenarios.iter().map(|&s| usize::from(s) - 1).collect()
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build()?;
    let seed = args.common.seed;
    let main = pool.install(|| run_grid(&grid, &scenarios, args.rho, seed))?;
    report_clamps(&main);

    fs::create_dir_all(&args.out).map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    write_recommendations(&main.cells, create(&args.out.join("recommendations.csv"))?)?;
    write_phi(&main.cells, create(&args.out.join("phi.csv"))?)?;
    let mut written = vec!["recommendations.csv", "phi.csv"];

    if args.rho != 0.0 {
        let base = pool.install(|| run_grid(&grid, &scenarios, 0.0, seed))?;
        let rows = sensitivity_counts(&base, &main)?;
        write_sensitivity(&rows, create(&args.out.join("correlation_sensitivity.csv"))?)?;
        written.push("correlation_sensitivity.csv");
        for r in rows.iter().filter(|r| r.scenario_id == "all") {
            println!(
                "{:<12} cells changed by >=2.5%: {:>4}   >=5%: {:>4}   of {}",
                r.model, r.count_2_5, r.count_5, r.total
            );
        }
    }
    eprintln!(
        "{} cells x {} trials; wrote {} to {}",
        main.cells.len(),
        grid.n_trials,
        written.join(", "),
        args.out.display()
    );
    Ok(())
}

fn report_clamps(g: &GridResult) {
    let mut seen = Vec::new();
    for c in &g.cells {
        for (theta, clamp) in [(c.theta1, c.clamps[0]), (c.theta2, c.clamps[1])] {
            if let Some(k) = clamp {
                if !seen.contains(&theta) {
                    seen.push(theta);
                    warn(&format!(
                        "correlation {} is not attainable for probabilities {:?}; used {:.4}",
                        k.requested, theta, k.applied
                    ));
                }
            }
        }
    }
}
