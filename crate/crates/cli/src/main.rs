use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmcda::assess::DEFAULT_SAMPLES;
use pmcda::{Model, Threshold};

mod assess;
mod case_study;
mod contours;
mod output;
mod simulate;
mod weights;

#[derive(Parser)]
#[command(name = "pmcda", version, about = "Probabilistic MCDA for benefit-risk assessment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the antidepressant case study (posterior summaries, mapped weights, probabilities).
    CaseStudy(CaseStudyArgs),
    /// Run the two-arm trial simulation grid.
    Simulate(SimulateArgs),
    /// Map linear weights onto the other models.
    MapWeights(MapWeightsArgs),
    /// Evaluate a two-criterion loss surface on a grid.
    Contours(ContoursArgs),
    /// Score a dataset file and print the assessment as JSON.
    Assess(AssessArgs),
}

/// Settings shared by the Monte Carlo commands.
#[derive(Args, Clone, Copy)]
struct Common {
    /// Master seed; every run is reproducible from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Recommendation threshold psi, in [0.5, 1].
    #[arg(long, default_value_t = Threshold::DEFAULT.value())]
    psi: f64,
    /// Interaction mass of the multi-linear model.
    #[arg(long = "c", default_value_t = 0.2)]
    c: f64,
}

#[derive(Args)]
pub struct CaseStudyArgs {
    /// Weight scenario (1, 2 or 3).
    #[arg(long, conflicts_with = "all")]
    scenario: Option<u8>,
    /// All three scenarios and all four models (the default when nothing is selected).
    #[arg(long)]
    all: bool,
    /// Restrict to one model.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// Posterior samples per arm and criterion.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    common: Common,
    /// Use the counts as printed (51/96 Venlafaxine responders) instead of 50/96.
    #[arg(long)]
    as_printed: bool,
    /// Use a dataset file with the same arms and criteria instead of the embedded data.
    #[arg(long, conflicts_with = "as_printed")]
    data: Option<PathBuf>,
    /// Directory for CSV tables and the text report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Reference-arm profile (1-9); repeat for several. Defaults to all nine.
    #[arg(long = "scenario", value_parser = clap::value_parser!(u8).range(1..=9))]
    scenarios: Vec<u8>,
    /// Simulated trials per cell.
    #[arg(long, default_value_t = 2500)]
    trials: usize,
    /// Posterior draws per arm and criterion within a trial.
    #[arg(long, default_value_t = 2000)]
    posterior_samples: usize,
    /// Patients per arm.
    #[arg(long, default_value_t = 100)]
    patients: u32,
    /// Correlation between benefit and risk outcomes. A non-zero value also
    /// runs the uncorrelated grid and writes the change counts.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho: f64,
    #[command(flatten)]
    common: Common,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "simulation")]
    out: PathBuf,
}

#[derive(Args)]
pub struct MapWeightsArgs {
    /// Linear weights, one per criterion.
    #[arg(required = true, num_args = 1..)]
    weights: Vec<f64>,
    #[arg(long = "c", default_value_t = 0.2)]
    c: f64,
    /// Only this target model (default: all four).
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
}

#[derive(Args)]
pub struct ContoursArgs {
    #[arg(long, value_parser = parse_model)]
    model: Model,
    /// Weight of the benefit criterion.
    #[arg(long)]
    w: f64,
    #[arg(long = "c", default_value_t = 0.2)]
    c: f64,
    /// Points per side.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// CSV file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct AssessArgs {
    /// Dataset JSON file.
    file: PathBuf,
    /// Override the dataset's model.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    psi: Option<f64>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse::<Model>().map_err(|_| format!("unknown model `{s}` (linear, product, multilinear, slos)"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CaseStudy(a) => case_study::run(&a),
        Command::Simulate(a) => simulate::run(&a),
        Command::MapWeights(a) => weights::run(&a),
        Command::Contours(a) => contours::run(&a),
        Command::Assess(a) => assess::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(e.as_ref()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Output piped into `head` and the like.
fn is_broken_pipe(e: &(dyn std::error::Error + 'static)) -> bool {
    let kind = match e.downcast_ref::<std::io::Error>() {
        Some(io) => Some(io.kind()),
        None => e.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()),
    };
    kind == Some(std::io::ErrorKind::BrokenPipe)
}
