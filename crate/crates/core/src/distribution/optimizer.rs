//! Random-mutation hill climbing on the total incentive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{absorb_drift, total_incentive, WealthDistribution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub distribution: WealthDistribution,
    /// Objective after every step, starting with the initial value.
    pub history: Vec<f64>,
    pub accepted: usize,
}

impl GaResult {
    pub fn objective(&self) -> f64 {
        *self.history.last().expect("history holds the initial value")
    }
}

/// Each step picks two distinct persons, moves `delta ~ U(0, scale / n)`
/// (`scale` times the mean weight) from the first to the second without
/// pushing the donor below the floor, re-sorts, and keeps the result only if
/// the total incentive strictly increases.
///
/// The input is sorted first. Deterministic for a given seed.
pub fn ga_optimize(
    init: &WealthDistribution,
    steps: usize,
    mutation_scale: f64,
    seed: u64,
) -> GaResult {
    let start = init.clone().into_sorted();
    let floor = start.floor();
    let n = start.len();
    let mut w = start.weights().to_vec();
    let mut current = total_incentive(&w);
    let mut history = Vec::with_capacity(steps + 1);
    history.push(current);
    if n < 2 || !(mutation_scale > 0.0) {
        history.resize(steps + 1, current);
        return GaResult {
            distribution: start,
            history,
            accepted: 0,
        };
    }

    let max_delta = mutation_scale / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trial = w.clone();
    let mut accepted = 0;
    for _ in 0..steps {
        let from = rng.gen_range(0..n);
        let to = loop {
            let j = rng.gen_range(0..n);
            if j != from {
                break j;
            }
        };
        let wanted: f64 = rng.gen_range(0.0..max_delta);
        let room = w[from] - floor;
        if room > 0.0 && wanted > 0.0 {
            trial.copy_from_slice(&w);
            if wanted >= room {
                trial[from] = floor;
                trial[to] += room;
            } else {
                trial[from] -= wanted;
                trial[to] += wanted;
            }
            trial.sort_by(f64::total_cmp);
            let value = total_incentive(&trial);
            if value > current {
                std::mem::swap(&mut w, &mut trial);
                current = value;
                accepted += 1;
            }
        }
        history.push(current);
    }
    absorb_drift(&mut w);
    GaResult {
        distribution: WealthDistribution::from_parts_unchecked(w, floor),
        history,
        accepted,
    }
}
