//! Beta posteriors for binomial event counts and their sampling.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialOutcome {
    pub events: u32,
    pub patients: u32,
}

impl BinomialOutcome {
    pub fn new(events: u32, patients: u32) -> Result<Self> {
        let o = Self { events, patients };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if self.patients == 0 {
            return Err(Error::InvalidOutcome("patients must be positive".into()));
        }
        if self.events > self.patients {
            return Err(Error::InvalidOutcome(format!(
                "{} events exceed {} patients",
                self.events, self.patients
            )));
        }
        Ok(())
    }

    pub fn proportion(&self) -> f64 {
        f64::from(self.events) / f64::from(self.patients)
    }
}

/// `Beta(a, b)`. Either parameter may be zero, which makes the posterior a
/// point mass at 1 (`b = 0`) or 0 (`a = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPosterior {
    a: f64,
    b: f64,
}

impl BetaPosterior {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) || a + b <= 0.0 {
            return Err(Error::InvalidPosterior(format!("Beta({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    /// Posterior under a `Beta(0, 0)` prior: `Beta(events, patients - events)`.
    pub fn from_counts(o: BinomialOutcome) -> Result<Self> {
        o.validate()?;
        Self::new(f64::from(o.events), f64::from(o.patients - o.events))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn point_mass(&self) -> Option<f64> {
        if self.a == 0.0 {
            Some(0.0)
        } else if self.b == 0.0 {
            Some(1.0)
        } else {
            None
        }
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    pub fn variance(&self) -> f64 {
        if self.point_mass().is_some() {
            return 0.0;
        }
        let s = self.a + self.b;
        self.a * self.b / (s * s * (s + 1.0))
    }

    pub fn sampler(&self) -> BetaSampler {
        match self.point_mass() {
            Some(p) => BetaSampler::Constant(p),
            None => BetaSampler::GammaRatio(
                Gamma::new(self.a, 1.0).expect("positive shape"),
                Gamma::new(self.b, 1.0).expect("positive shape"),
            ),
        }
    }
}

pub fn posterior_from_counts(o: BinomialOutcome) -> Result<BetaPosterior> {
    BetaPosterior::from_counts(o)
}

/// Draws `X / (X + Y)` with `X ~ Gamma(a)`, `Y ~ Gamma(b)`.
#[derive(Debug, Clone, Copy)]
pub enum BetaSampler {
    Constant(f64),
    GammaRatio(Gamma<f64>, Gamma<f64>),
}

impl Distribution<f64> for BetaSampler {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            BetaSampler::Constant(p) => *p,
            BetaSampler::GammaRatio(ga, gb) => {
                let x = ga.sample(rng);
                let y = gb.sample(rng);
                x / (x + y)
            }
        }
    }
}

/// `m` draws from `p` on the stream `seed` (path `[]`).
pub fn draw_samples(p: &BetaPosterior, m: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, &[]);
    draw_samples_with(p, m, &mut rng)
}

pub fn draw_samples_with<R: Rng + ?Sized>(p: &BetaPosterior, m: usize, rng: &mut R) -> Vec<f64> {
    let sampler = p.sampler();
    (0..m).map(|_| sampler.sample(rng)).collect()
}
