//! Wealth distributions over a ranked population and the incentive to work
//! they create.
//!
//! Person `k`'s incentive is the relative gain of moving up one rank,
//! `i_k = (w_{k+1} - w_k) / w_k`. The richest person has nowhere to go and
//! gets `i_n = 0`. A society's total incentive `I` is the sum over people.

mod equilibrium;
mod family;
mod optimizer;

pub use equilibrium::{classify_equilibrium, Equilibrium};
pub use family::{exponential_family, ExponentialFamily, ExponentialFamilyParams};
pub use optimizer::{ga_optimize, GaResult};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of the total from one.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Weights, poorest first when sorted. Construction checks normalization and
/// the floor; `sorted` records whether the weights are non-decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WealthDistribution {
    weights: Vec<f64>,
    floor: f64,
    sorted: bool,
}

impl WealthDistribution {
    pub fn new(weights: Vec<f64>, floor: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no persons".into()));
        }
        if !(floor >= 0.0) || !floor.is_finite() {
            return Err(Error::domain("w0", floor, "finite and >= 0"));
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "weight {k} is not finite: {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let slack = floor * 1e-12;
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, &w)| w < floor - slack) {
            return Err(Error::InvalidDistribution(format!(
                "weight {k} = {w} is below the floor {floor}"
            )));
        }
        let sorted = is_sorted(&weights);
        Ok(Self {
            weights,
            floor,
            sorted,
        })
    }

    /// Everybody gets `1/n`.
    pub fn uniform(n: usize, floor: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", n, ">= 1"));
        }
        Self::new(vec![1.0 / n as f64; n], floor)
    }

    /// Uniform random draws projected onto the constraints:
    /// `w_k = w0 + (1 - n w0) x_k / sum(x)`, then sorted.
    pub fn random(n: usize, floor: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", n, ">= 1"));
        }
        let spare = 1.0 - n as f64 * floor;
        if spare < -MASS_TOLERANCE {
            return Err(Error::domain("w0", floor, "at most 1/n"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = draws.iter().sum();
        let mut weights: Vec<f64> = draws
            .iter()
            .map(|x| floor + spare.max(0.0) * x / total)
            .collect();
        weights.sort_by(f64::total_cmp);
        absorb_drift(&mut weights);
        Self::new(weights, floor)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Same weights in non-decreasing order.
    pub fn into_sorted(mut self) -> Self {
        if !self.sorted {
            self.weights.sort_by(f64::total_cmp);
            self.sorted = true;
        }
        self
    }

    pub(crate) fn from_parts_unchecked(weights: Vec<f64>, floor: f64) -> Self {
        let sorted = is_sorted(&weights);
        Self {
            weights,
            floor,
            sorted,
        }
    }
}

fn is_sorted(weights: &[f64]) -> bool {
    weights.windows(2).all(|p| p[0] <= p[1])
}

/// Moves floating-point drift in the total onto the largest weight.
pub(crate) fn absorb_drift(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    if let Some(top) = weights.last_mut() {
        *top += 1.0 - total;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Incentives {
    pub per_person: Vec<f64>,
    pub total: f64,
}

/// Forward-difference incentives on a sorted distribution.
pub fn incentive_total(dist: &WealthDistribution) -> Result<Incentives> {
    if !dist.is_sorted() {
        return Err(Error::Unsorted);
    }
    let per_person = incentives_of(dist.weights());
    let total = per_person.iter().sum();
    Ok(Incentives { per_person, total })
}

pub(crate) fn incentives_of(w: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = w.windows(2).map(|p| (p[1] - p[0]) / p[0]).collect();
    out.push(0.0);
    out
}

pub(crate) fn total_incentive(w: &[f64]) -> f64 {
    w.windows(2).map(|p| (p[1] - p[0]) / p[0]).sum()
}

/// Continuous counterpart: integrating `w'/w` over the population gives
/// `ln(w(1) / w(0))`.
pub fn continuous_incentive_total(w_start: f64, w_end: f64) -> Result<f64> {
    if !(w_start > 0.0) {
        return Err(Error::domain("w_start", w_start, "> 0"));
    }
    if !(w_end > 0.0) {
        return Err(Error::domain("w_end", w_end, "> 0"));
    }
    Ok((w_end / w_start).ln())
}
