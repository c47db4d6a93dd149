use pmcda::contours::{contour_grid, two_criterion_weights};

use crate::output::{create, Result};
use crate::ContoursArgs;

pub fn run(args: &ContoursArgs) -> Result<()> {
    let w = two_criterion_weights(args.model, args.w, args.c)?;
    let grid = contour_grid(&w, args.grid)?;
    match &args.out {
        Some(path) => grid.write_csv(create(path)?)?,
        None => grid.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}
