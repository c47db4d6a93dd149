//! Two-criterion loss surfaces for contour plots.
//!
//! Points live in the plotting plane: benefit value `u_1` on the x axis and
//! risk `1 - u_2` on the y axis. Utility models are shown as `1 - utility`
//! so that every surface is a loss.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{score, Flavor, Model, WeightSet};
use crate::scalar::Scalar;

/// Largest grid served to interactive clients.
pub const MAX_INTERACTIVE_GRID: usize = 201;

/// Weights `(w, 1 - w)`, or `(w, 1 - w - c)` with interaction mass `c` for
/// the multi-linear model.
pub fn two_criterion_weights<T: Scalar>(model: Model, w: T, c: T) -> Result<WeightSet<T>> {
    let one = T::one();
    match model {
        Model::Linear => WeightSet::linear(vec![w, one - w]),
        Model::Product => WeightSet::product(vec![w, one - w]),
        Model::Slos => WeightSet::slos(vec![w, one - w]),
        Model::Multilinear => WeightSet::multilinear(vec![w, one - w - c], c),
    }
    .map_err(|e| Error::InfeasibleWeights {
        field: "w".into(),
        message: e.to_string(),
    })
}

/// Loss at plotting coordinates `(benefit, risk)`.
pub fn loss_at<T: Scalar>(w: &WeightSet<T>, benefit: T, risk: T) -> Result<T> {
    let s = score(&[benefit, T::one() - risk], w)?;
    Ok(match s.flavor {
        Flavor::Utility => T::one() - s.value,
        Flavor::Loss => s.value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourPoint<T> {
    pub benefit: T,
    pub risk: T,
    /// `None` stands for an infinite loss.
    pub loss: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourGrid<T> {
    pub model: Model,
    pub weights: WeightSet<T>,
    pub size: usize,
    /// Row-major: risk varies slowest.
    pub points: Vec<ContourPoint<T>>,
}

/// Evaluates the loss on a `size x size` grid spanning `[0, 1]^2`.
pub fn contour_grid<T: Scalar>(w: &WeightSet<T>, size: usize) -> Result<ContourGrid<T>> {
    if w.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: w.len(),
        });
    }
    if size < 2 {
        return Err(Error::field("grid", "grid needs at least 2 points per side"));
    }
    let step = T::one() / T::from_usize_lossy(size - 1);
    let mut points = Vec::with_capacity(size * size);
    for r in 0..size {
        let risk = T::from_usize_lossy(r) * step;
        for b in 0..size {
            let benefit = T::from_usize_lossy(b) * step;
            let loss = loss_at(w, benefit, risk)?;
            points.push(ContourPoint {
                benefit,
                risk,
                loss: loss.is_finite().then_some(loss),
            });
        }
    }
    Ok(ContourGrid {
        model: w.model(),
        weights: w.clone(),
        size,
        points,
    })
}

impl<T: Scalar> ContourGrid<T> {
    pub fn at(&self, benefit_index: usize, risk_index: usize) -> &ContourPoint<T> {
        &self.points[risk_index * self.size + benefit_index]
    }

    /// CSV with columns `benefit,risk,loss`; infinite losses are written `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["benefit", "risk", "loss"])?;
        for p in &self.points {
            let loss = p.loss.map_or_else(|| "inf".to_string(), |l| l.to_string());
            wtr.write_record([p.benefit.to_string(), p.risk.to_string(), loss])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Slope `d risk / d benefit` of the level set through `(benefit, risk)`,
/// from central differences of the loss with step `h`.
pub fn level_set_slope<T: Scalar>(w: &WeightSet<T>, benefit: T, risk: T, h: T) -> Result<T> {
    let two_h = h + h;
    let dx = (loss_at(w, benefit + h, risk)? - loss_at(w, benefit - h, risk)?) / two_h;
    let dy = (loss_at(w, benefit, risk + h)? - loss_at(w, benefit, risk - h)?) / two_h;
    Ok(-dx / dy)
}
