use pmcda::assess::PairComparison;
use pmcda::case_study::{dataset, run_case_study, run_case_study_grid, Variant, WeightScenario, SCENARIOS};
use pmcda::{Decision, Model, Threshold};

fn f_over_p(c: &[PairComparison]) -> f64 {
    let p = c.iter().find(|c| c.arm_i == "Fluoxetine" && c.arm_h == "Placebo").unwrap();
    p.result.probability
}

#[test]
fn fluoxetine_over_placebo_depends_on_the_model() {
    let d = dataset(Variant::Reproduction);
    let s1 = WeightScenario::get(1).unwrap();
    let lin = run_case_study(&d, s1, Model::Linear, 100_000, Threshold::DEFAULT, 0.2, 1).unwrap();
    let slos = run_case_study(&d, s1, Model::Slos, 100_000, Threshold::DEFAULT, 0.2, 1).unwrap();
    assert!((f_over_p(&lin) - 0.072).abs() < 0.015);
    assert!((f_over_p(&slos) - 0.473).abs() < 0.015);
}

#[test]
fn benefit_first_weights_recommend_nothing_under_additive_models() {
    let d = dataset(Variant::Reproduction);
    let r = run_case_study_grid(&d, &SCENARIOS[1..2], &[Model::Linear, Model::Multilinear], 50_000, Threshold::DEFAULT, 0.2, 3).unwrap();
    for res in &r.results {
        for c in &res.comparisons {
            assert_eq!(c.result.decision, Decision::Neither, "{} {} vs {}", res.model, c.arm_i, c.arm_h);
        }
    }
}

#[test]
fn placebo_is_recommended_over_venlafaxine_under_linear_scenario_1() {
    let d = dataset(Variant::Reproduction);
    let r = run_case_study(&d, SCENARIOS[0], Model::Linear, 50_000, Threshold::DEFAULT, 0.2, 2).unwrap();
    let vp = r.iter().find(|c| c.arm_h == "Placebo" && c.arm_i == "Venlafaxine").unwrap();
    assert_eq!(vp.result.decision, Decision::RecommendH);
}

#[test]
fn report_serialises() {
    let d = dataset(Variant::AsReported);
    let r = run_case_study_grid(&d, &SCENARIOS, &[Model::Multilinear], 2_000, Threshold::DEFAULT, 0.2, 1).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert_eq!(v["posteriors"][0]["arm"], "Venlafaxine");
    assert_eq!(v["results"][0]["comparisons"][0]["decision"], "recommend_h");
}
