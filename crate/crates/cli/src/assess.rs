use std::fs;

use pmcda::{assess, Dataset, Limits};

use crate::output::{print_json, warn, Result};
use crate::AssessArgs;

pub fn run(args: &AssessArgs) -> Result<()> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| format!("cannot read {}: {e}", args.file.display()))?;
    let mut d = Dataset::from_json(&text)?;
    if let Some(m) = args.model {
        d.model = m;
    }
    d.samples = args.samples.or(d.samples);
    d.seed = args.seed.or(d.seed);
    d.psi = args.psi.or(d.psi);
    let r = assess(&d, Limits::default())?;
    for w in &r.warnings {
        warn(w);
    }
    print_json(&r)
}
