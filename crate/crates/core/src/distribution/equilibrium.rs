//! Naming the shapes the optimizer settles into.

use serde::{Deserialize, Serialize};

use super::WealthDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Equilibrium {
    /// Everybody within `rel_tol` of `1/n`.
    Uniform,
    /// Everybody else at the floor and the top holds all but `rel_tol` of
    /// the wealth. Only reachable when the floor is negligible.
    Delta,
    /// One person at the floor, one far above, the rest equal.
    SlaveOfficial,
    /// The top holds more than half of all wealth and everybody below the
    /// penultimate person sits at the floor. The penultimate may sit at the
    /// floor as well; that is the one person with something to gain.
    BankerWheedler,
    Other,
}

impl Equilibrium {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Delta => "delta",
            Self::SlaveOfficial => "slave_official",
            Self::BankerWheedler => "banker_wheedler",
            Self::Other => "other",
        }
    }
}

/// Checks the shapes in declaration order; the first match wins.
/// `rel_tol` is relative to the level being compared against (the floor,
/// the mean, or `1/n`).
pub fn classify_equilibrium(dist: &WealthDistribution, rel_tol: f64) -> Equilibrium {
    let mut w = dist.weights().to_vec();
    w.sort_by(f64::total_cmp);
    let n = w.len();
    let floor = dist.floor();
    let uniform = 1.0 / n as f64;
    let at_floor = |x: f64| x - floor <= rel_tol * floor;
    let top = w[n - 1];

    if w.iter().all(|&x| (x - uniform).abs() <= rel_tol * uniform) {
        return Equilibrium::Uniform;
    }
    if n < 2 {
        return Equilibrium::Other;
    }
    let floor_count = w[..n - 1].iter().filter(|&&x| at_floor(x)).count();
    if floor_count == n - 1 && top >= 1.0 - rel_tol {
        return Equilibrium::Delta;
    }
    if n >= 3 && at_floor(w[0]) && !at_floor(w[1]) {
        let bulk = &w[1..n - 1];
        let mean = bulk.iter().sum::<f64>() / bulk.len() as f64;
        let level = bulk.iter().all(|&x| (x - mean).abs() <= rel_tol * mean);
        if level && top > mean * (1.0 + rel_tol) {
            return Equilibrium::SlaveOfficial;
        }
    }
    if top > 0.5 && n >= 2 && w[..n.saturating_sub(2)].iter().all(|&x| at_floor(x)) {
        return Equilibrium::BankerWheedler;
    }
    Equilibrium::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    const W0: f64 = 1.0 / 300.0;

    fn dist(mut w: Vec<f64>, floor: f64) -> WealthDistribution {
        let drift = 1.0 - w.iter().sum::<f64>();
        *w.last_mut().unwrap() += drift;
        WealthDistribution::new(w, floor).unwrap()
    }

    #[test]
    fn uniform() {
        let d = WealthDistribution::uniform(30, W0).unwrap();
        assert_eq!(classify_equilibrium(&d, 0.01), Equilibrium::Uniform);
    }

    #[test]
    fn banker_with_everybody_else_at_the_floor() {
        let mut w = vec![W0; 29];
        w.push(1.0 - 29.0 * W0);
        assert_eq!(classify_equilibrium(&dist(w, W0), 0.05), Equilibrium::BankerWheedler);
    }

    #[test]
    fn banker_with_an_intermediate_wheedler() {
        let mut w = vec![W0; 28];
        w.push(0.0567);
        w.push(1.0 - 28.0 * W0 - 0.0567);
        assert_eq!(classify_equilibrium(&dist(w, W0), 0.05), Equilibrium::BankerWheedler);
    }

    #[test]
    fn negligible_floor_is_delta() {
        let floor = 1e-9;
        let mut w = vec![floor; 29];
        w.push(1.0 - 29.0 * floor);
        assert_eq!(classify_equilibrium(&dist(w, floor), 0.01), Equilibrium::Delta);
    }

    #[test]
    fn slave_and_official() {
        let mut w = vec![W0];
        w.extend(vec![0.0317; 28]);
        w.push(1.0 - W0 - 28.0 * 0.0317);
        assert_eq!(classify_equilibrium(&dist(w, W0), 0.05), Equilibrium::SlaveOfficial);
    }

    #[test]
    fn bimodal_is_other() {
        let mut w = vec![0.01; 15];
        w.extend(vec![0.9 / 15.0; 15]);
        assert_eq!(classify_equilibrium(&dist(w, W0), 0.05), Equilibrium::Other);
    }
}
