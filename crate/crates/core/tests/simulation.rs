use pmcda::sim::{
    run_cell, run_grid, simulate_trial, write_phi, write_recommendations, ScenarioGrid, TrialSpec,
};
use pmcda::Model;

fn small() -> ScenarioGrid {
    ScenarioGrid {
        n_trials: 40,
        n_posterior_samples: 400,
        ..ScenarioGrid::default()
    }
}

#[test]
fn identical_arms_split_evenly_on_average() {
    let spec = TrialSpec {
        theta1: (0.5, 0.3),
        theta2: (0.5, 0.3),
        n_patients: 100,
        posterior_samples: 2000,
        rho: 0.0,
        interaction_mass: 0.2,
    };
    let mut mean = [0.0; 4];
    for seed in 0..200 {
        let p = simulate_trial(&spec, seed).unwrap();
        for (m, x) in mean.iter_mut().zip(p) {
            assert!((0.0..=1.0).contains(&x));
            *m += x / 200.0;
        }
    }
    for m in mean {
        assert!((m - 0.5).abs() < 0.06, "{mean:?}");
    }
}

#[test]
fn a_clearly_better_arm_is_recommended() {
    let g = small();
    // T1 = (0.5, 0.5); T2 with benefit 0.1 and risk 0.9 is worse on both
    let cell = 8 * 9;
    assert_eq!(g.t2_profile(cell), (0.1, 0.9));
    let r = run_cell(&g, 0, cell, 0.0, 4).unwrap();
    for m in Model::ALL {
        assert_eq!(r.p_rec_t1(m), 1.0, "{m}");
        assert_eq!(r.p_rec_t2(m), 0.0, "{m}");
    }
}

#[test]
fn grid_is_ordered_and_reproducible() {
    let g = small();
    let a = run_grid(&g, &[3], 0.0, 9).unwrap();
    let b = run_grid(&g, &[3], 0.0, 9).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.cells.len(), 81);
    assert!(a.cells.iter().enumerate().all(|(i, c)| c.cell == i && c.scenario == 4));
}

#[test]
fn csv_layout() {
    let g = small();
    let r = run_grid(&g, &[0], 0.0, 1).unwrap();
    let mut rec = Vec::new();
    write_recommendations(&r.cells, &mut rec).unwrap();
    let rec = String::from_utf8(rec).unwrap();
    assert_eq!(rec.lines().count(), 1 + 81 * 4);
    assert!(rec.starts_with("scenario_id,theta2_benefit,theta2_risk,model,p_rec_t1,p_rec_t2\n1,0.1,0.1,linear,"));
    let mut phi = Vec::new();
    write_phi(&r.cells, &mut phi).unwrap();
    let phi = String::from_utf8(phi).unwrap();
    assert_eq!(phi.lines().count(), 1 + 81 * 6);
    assert!(phi.lines().nth(1).unwrap().starts_with("1,0.1,0.1,P-L,"));
}

#[test]
fn infeasible_correlation_is_clamped_not_rejected() {
    let g = small();
    // scenario 8 has T1 = (0.9, 0.1)
    let r = run_cell(&g, 7, 0, 0.8, 1).unwrap();
    let c = r.clamps[0].expect("clamped");
    assert!((c.applied - 1.0 / 9.0).abs() < 1e-12);
}
