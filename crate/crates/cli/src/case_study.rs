use std::fmt::Write as _;
use std::fs;
use std::io::Write;

use pmcda::assess::{ArmSummary, LOW_SAMPLE_WARNING};
use pmcda::case_study::{dataset, run_case_study_grid, CaseStudyReport, Variant, WeightScenario, SCENARIOS};
use pmcda::{Dataset, Model, Threshold};

use crate::output::{create, warn, Result};
use crate::CaseStudyArgs;

pub fn run(args: &CaseStudyArgs) -> Result<()> {
    let d = match (&args.data, args.as_printed) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            Dataset::from_json(&text)?
        }
        (None, true) => dataset(Variant::AsReported),
        (None, false) => dataset(Variant::Reproduction),
    };
    let scenarios = match args.scenario {
        Some(id) if !args.all => vec![WeightScenario::get(id)?],
        _ => SCENARIOS.to_vec(),
    };
    let models = match args.model {
        Some(m) if !args.all => vec![m],
        _ => Model::ALL.to_vec(),
    };
    if args.samples < LOW_SAMPLE_WARNING {
        warn(&format!(
            "{} posterior samples is too few for stable estimates; intervals and probabilities will vary widely (use at least {LOW_SAMPLE_WARNING})",
            args.samples
        ));
    }
    let psi = Threshold::new(args.common.psi)?;
    let report = run_case_study_grid(&d, &scenarios, &models, args.samples, psi, args.common.c, args.common.seed)?;

    let text = render(&report);
    print!("{text}");
    if let Some(dir) = &args.out {
        create(&dir.join("report.txt"))?.write_all(text.as_bytes())?;
        write_posteriors(&report.posteriors, create(&dir.join("posteriors.csv"))?)?;
        write_weights(&report, &d, create(&dir.join("mapped_weights.csv"))?)?;
        write_probabilities(&report, create(&dir.join("probabilities.csv"))?)?;
        eprintln!("wrote report.txt, posteriors.csv, mapped_weights.csv and probabilities.csv to {}", dir.display());
    }
    Ok(())
}

fn write_posteriors<W: Write>(arms: &[ArmSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["arm", "criterion", "quantity", "mean", "lower", "upper"])?;
    for a in arms {
        for c in &a.criteria {
            for (q, s) in [("performance", c.performance), ("partial_value", c.partial_value)] {
                w.write_record([
                    a.arm.as_str(),
                    &c.criterion,
                    q,
                    &s.mean.to_string(),
                    &s.lower.to_string(),
                    &s.upper.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_weights<W: Write>(r: &CaseStudyReport, d: &Dataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "model", "criterion", "weight", "floored"])?;
    for s in &r.results {
        for (j, (c, x)) in d.criteria.iter().zip(s.weights.weights()).enumerate() {
            w.write_record([
                s.scenario.to_string(),
                s.model.to_string(),
                c.name.clone(),
                x.to_string(),
                s.floored.contains(&j).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_probabilities<W: Write>(r: &CaseStudyReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scenario",
        "model",
        "arm_i",
        "arm_h",
        "probability",
        "reverse_probability",
        "ties",
        "decision",
    ])?;
    for s in &r.results {
        for c in &s.comparisons {
            w.write_record([
                s.scenario.to_string(),
                s.model.to_string(),
                c.arm_i.clone(),
                c.arm_h.clone(),
                c.result.probability.to_string(),
                c.result.reverse_probability.to_string(),
                c.result.ties.to_string(),
                c.result.decision.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn render(r: &CaseStudyReport) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{} posterior samples, seed {}, psi {}, c {}\n",
        r.samples, r.seed, r.psi, r.interaction_mass
    );
    let _ = writeln!(t, "Posterior mean (95% CrI)");
    let _ = writeln!(t, "{:<12} {:<10} {:>20} {:>20}", "arm", "criterion", "performance", "partial value");
    for a in &r.posteriors {
        for c in &a.criteria {
            let f = |s: pmcda::stats::Summary| format!("{:.2} ({:.2}, {:.2})", s.mean, s.lower, s.upper);
            let _ = writeln!(
                t,
                "{:<12} {:<10} {:>20} {:>20}",
                a.arm,
                c.criterion,
                f(c.performance),
                f(c.partial_value)
            );
        }
    }

    let _ = writeln!(t, "\nWeights");
    for s in &r.results {
        let ws: Vec<String> = s.weights.weights().iter().map(|w| format!("{w:.4}")).collect();
        let floor = if s.floored.is_empty() { "" } else { "  (floored at 0)" };
        let _ = writeln!(t, "scenario {}  {:<12} {}{floor}", s.scenario, s.model, ws.join("  "));
    }

    let _ = writeln!(t, "\nProbability that the first arm is better (%), decision at psi = {}", r.psi);
    for s in &r.results {
        let cells: Vec<String> = s
            .comparisons
            .iter()
            .map(|c| {
                format!(
                    "{} vs {}: {:5.1} [{}]",
                    c.arm_i,
                    c.arm_h,
                    100.0 * c.result.probability,
                    c.result.decision
                )
            })
            .collect();
        let _ = writeln!(t, "scenario {}  {:<12} {}", s.scenario, s.model, cells.join("   "));
    }
    t
}
