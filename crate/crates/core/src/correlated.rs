//! Correlated pairs of binary outcomes through a Gaussian copula.
//!
//! Each patient gets latent standard normals `(Z1, Z2)` with correlation `r`;
//! outcome `j` occurs when `Z_j <= Phi^-1(theta_j)`. The latent `r` is solved
//! so the Pearson correlation of the two binary outcomes equals the target.
//! Targets outside the Fréchet bounds of the marginals are clamped to the
//! nearest attainable value (latent `r = +-1`) and the clamp is reported.

#![allow(clippy::excessive_precision)]

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::roots::bisect;

#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal quantile; `+-inf` at 1 and 0.
pub fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        Normal::standard().inverse_cdf(p)
    }
}

// Gauss-Legendre half-rules (6, 12 and 20 points) for the bivariate normal.
const GL6_W: [f64; 3] = [0.1713244923791705, 0.3607615730481384, 0.4679139345726904];
const GL6_X: [f64; 3] = [0.9324695142031522, 0.6612093864662647, 0.2386191860831970];
const GL12_W: [f64; 6] = [
    0.04717533638651177,
    0.1069393259953183,
    0.1600783285433464,
    0.2031674267230659,
    0.2334925365383547,
    0.2491470458134029,
];
const GL12_X: [f64; 6] = [
    0.9815606342467191,
    0.9041172563704750,
    0.7699026741943050,
    0.5873179542866171,
    0.3678314989981802,
    0.1252334085114692,
];
const GL20_W: [f64; 10] = [
    0.01761400713915212,
    0.04060142980038694,
    0.06267204833410906,
    0.08327674157670475,
    0.1019301198172404,
    0.1181945319615184,
    0.1316886384491766,
    0.1420961093183821,
    0.1491729864726037,
    0.1527533871307259,
];
const GL20_X: [f64; 10] = [
    0.9931285991850949,
    0.9639719272779138,
    0.9122344282513259,
    0.8391169718222188,
    0.7463319064601508,
    0.6360536807265150,
    0.5108670019508271,
    0.3737060887154196,
    0.2277858511416451,
    0.07652652113349733,
];

/// `P(X > h, Y > k)` for standard bivariate normals with correlation `r`
/// (Drezner-Wesolowsky as refined by Genz; ~1e-15 absolute accuracy).
fn bvn_upper(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return if k == f64::NEG_INFINITY { 1.0 } else { std_normal_cdf(-k) };
    }
    if k == f64::NEG_INFINITY {
        return std_normal_cdf(-h);
    }
    if r == 0.0 {
        return std_normal_cdf(-h) * std_normal_cdf(-k);
    }
    let (w, x): (&[f64], &[f64]) = if r.abs() < 0.3 {
        (&GL6_W, &GL6_X)
    } else if r.abs() < 0.75 {
        (&GL12_W, &GL12_X)
    } else {
        (&GL20_W, &GL20_X)
    };
    let tp = 2.0 * std::f64::consts::PI;
    let mut k = k;
    let mut hk = h * k;
    let mut bvn = 0.0;

    if r.abs() < 0.925 {
        let hs = (h * h + k * k) / 2.0;
        let asr = r.asin() / 2.0;
        for i in 0..w.len() {
            for sign in [-1.0, 1.0] {
                let sn = (asr * (1.0 + sign * x[i])).sin();
                bvn += w[i] * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
            }
        }
        bvn = bvn * asr / tp + std_normal_cdf(-h) * std_normal_cdf(-k);
    } else {
        if r < 0.0 {
            k = -k;
            hk = -hk;
        }
        if r.abs() < 1.0 {
            let a_s = (1.0 - r) * (1.0 + r);
            let mut a = a_s.sqrt();
            let bs = (h - k).powi(2);
            let c = (4.0 - hk) / 8.0;
            let d = (12.0 - hk) / 16.0;
            let mut asr = -(bs / a_s + hk) / 2.0;
            if asr > -100.0 {
                bvn = a
                    * asr.exp()
                    * (1.0 - c * (bs - a_s) * (1.0 - d * bs / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
            }
            if hk > -100.0 {
                let b = bs.sqrt();
                let sp = tp.sqrt() * std_normal_cdf(-b / a);
                bvn -= (-hk / 2.0).exp() * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for i in 0..w.len() {
                for sign in [-1.0, 1.0] {
                    let xs = (a * (1.0 + sign * x[i])).powi(2);
                    let rs = (1.0 - xs).sqrt();
                    asr = -(bs / xs + hk) / 2.0;
                    if asr > -100.0 {
                        let sp = 1.0 + c * xs * (1.0 + d * xs);
                        let ep = (-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs;
                        bvn += a * w[i] * asr.exp() * (ep - sp);
                    }
                }
            }
            bvn = -bvn / tp;
        }
        if r > 0.0 {
            bvn += std_normal_cdf(-h.max(k));
        } else if h >= k {
            bvn = -bvn;
        } else {
            let l = if h < 0.0 {
                std_normal_cdf(k) - std_normal_cdf(h)
            } else {
                std_normal_cdf(-h) - std_normal_cdf(-k)
            };
            bvn = l - bvn;
        }
    }
    bvn.clamp(0.0, 1.0)
}

/// `P(X <= h, Y <= k)` for standard bivariate normals with correlation `r`.
pub fn bivariate_normal_cdf(h: f64, k: f64, r: f64) -> f64 {
    bvn_upper(-h, -k, r)
}

/// Fréchet bounds on the Pearson correlation of two Bernoulli variables.
/// Degenerate marginals (0 or 1) admit only zero correlation.
pub fn attainable_correlation(theta1: f64, theta2: f64) -> (f64, f64) {
    let s = (theta1 * (1.0 - theta1) * theta2 * (1.0 - theta2)).sqrt();
    if s == 0.0 {
        return (0.0, 0.0);
    }
    let joint_max = theta1.min(theta2);
    let joint_min = (theta1 + theta2 - 1.0).max(0.0);
    let prod = theta1 * theta2;
    ((joint_min - prod) / s, (joint_max - prod) / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationClamp {
    pub requested: f64,
    pub applied: f64,
}

/// A calibrated generator for paired Bernoulli outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatedBernoulli {
    theta: (f64, f64),
    rho: f64,
    latent_rho: f64,
    thresholds: (f64, f64),
    clamp: Option<CorrelationClamp>,
}

impl CorrelatedBernoulli {
    pub fn new(theta1: f64, theta2: f64, rho: f64) -> Result<Self> {
        for (name, t) in [("theta1", theta1), ("theta2", theta2)] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::field(name, format!("marginal probability {t} outside [0, 1]")));
            }
        }
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::field("rho", format!("correlation {rho} outside [-1, 1]")));
        }
        let (lo, hi) = attainable_correlation(theta1, theta2);
        let applied = rho.clamp(lo, hi);
        let clamp = (applied != rho).then_some(CorrelationClamp {
            requested: rho,
            applied,
        });
        let thresholds = (std_normal_quantile(theta1), std_normal_quantile(theta2));
        let latent_rho = if applied == 0.0 {
            0.0
        } else if applied >= hi {
            1.0
        } else if applied <= lo {
            -1.0
        } else {
            let s = (theta1 * (1.0 - theta1) * theta2 * (1.0 - theta2)).sqrt();
            let joint = theta1 * theta2 + applied * s;
            let (h, k) = thresholds;
            bisect(|r: f64| bivariate_normal_cdf(h, k, r) - joint, -1.0, 1.0, 1e-12, 200)?
        };
        Ok(Self {
            theta: (theta1, theta2),
            rho: applied,
            latent_rho,
            thresholds,
            clamp,
        })
    }

    pub fn marginals(&self) -> (f64, f64) {
        self.theta
    }

    /// Correlation actually targeted after clamping.
    pub fn correlation(&self) -> f64 {
        self.rho
    }

    pub fn latent_correlation(&self) -> f64 {
        self.latent_rho
    }

    pub fn clamp(&self) -> Option<CorrelationClamp> {
        self.clamp
    }

    /// One patient's pair of outcomes. Always consumes two normals, so streams
    /// stay aligned across different target correlations.
    #[inline]
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (bool, bool) {
        let z1: f64 = StandardNormal.sample(rng);
        let z3: f64 = StandardNormal.sample(rng);
        let r = self.latent_rho;
        let z2 = r * z1 + (1.0 - r * r).max(0.0).sqrt() * z3;
        (z1 <= self.thresholds.0, z2 <= self.thresholds.1)
    }

    pub fn sample_counts<R: Rng + ?Sized>(&self, n: u32, rng: &mut R) -> PairedCounts {
        let mut counts = PairedCounts {
            patients: n,
            ..Default::default()
        };
        for _ in 0..n {
            let (a, b) = self.sample_pair(rng);
            counts.first += u32::from(a);
            counts.second += u32::from(b);
            counts.both += u32::from(a && b);
        }
        counts
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairedCounts {
    pub patients: u32,
    pub first: u32,
    pub second: u32,
    pub both: u32,
}

impl PairedCounts {
    /// Sample Pearson (phi) correlation; `None` when either outcome is constant.
    pub fn empirical_correlation(&self) -> Option<f64> {
        let n = f64::from(self.patients);
        let p1 = f64::from(self.first) / n;
        let p2 = f64::from(self.second) / n;
        let p11 = f64::from(self.both) / n;
        let s = (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
        (s > 0.0).then(|| (p11 - p1 * p2) / s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatedDraw {
    pub counts: PairedCounts,
    pub correlation: f64,
    pub clamp: Option<CorrelationClamp>,
}

/// Generates `n_patients` paired outcomes with marginals `theta` and target correlation `rho`.
pub fn draw_correlated_pair(
    theta1: f64,
    theta2: f64,
    rho: f64,
    n_patients: u32,
    seed: u64,
) -> Result<CorrelatedDraw> {
    let gen = CorrelatedBernoulli::new(theta1, theta2, rho)?;
    let mut rng = substream(seed, &[]);
    Ok(CorrelatedDraw {
        counts: gen.sample_counts(n_patients, &mut rng),
        correlation: gen.correlation(),
        clamp: gen.clamp(),
    })
}
