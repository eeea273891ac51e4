//! Exponentially rising wealth curves with an offset,
//! `w(x) = w0 + (wmax - w0) (e^{bx} - 1) / (e^b - 1)`.

use serde::{Deserialize, Serialize};

use super::{absorb_drift, WealthDistribution, MASS_TOLERANCE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFamilyParams {
    pub w0: f64,
    pub b: f64,
    /// Fixed by normalization, not a free parameter.
    pub wmax: f64,
}

impl ExponentialFamilyParams {
    /// The curve at population position `x` in `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        self.w0 + (self.wmax - self.w0) * shape(self.b, x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFamily {
    pub params: ExponentialFamilyParams,
    pub distribution: WealthDistribution,
}

/// Rises from 0 at `x = 0` to 1 at `x = 1`; tends to `x` as `b -> 0`.
fn shape(b: f64, x: f64) -> f64 {
    (b * x).exp_m1() / b.exp_m1()
}

/// Samples the curve at cell midpoints `x = (k - 1/2) / n`.
///
/// Normalization is linear in `wmax`, so it is solved directly:
/// `wmax = w0 + (1 - n w0) / sum_k shape(x_k)`.
pub fn exponential_family(w0: f64, b: f64, n: usize) -> Result<ExponentialFamily> {
    if n == 0 {
        return Err(Error::domain("n", n, ">= 1"));
    }
    if !(w0 >= 0.0) || !w0.is_finite() {
        return Err(Error::domain("w0", w0, "finite and >= 0"));
    }
    if b == 0.0 || !b.is_finite() {
        return Err(Error::domain("b", b, "finite and nonzero"));
    }
    let spare = 1.0 - n as f64 * w0;
    if spare < -MASS_TOLERANCE {
        return Err(Error::domain("w0", w0, "at most 1/n"));
    }
    let spare = spare.max(0.0);
    let xs: Vec<f64> = (1..=n).map(|k| (k as f64 - 0.5) / n as f64).collect();
    let shape_sum: f64 = xs.iter().map(|&x| shape(b, x)).sum();
    let params = ExponentialFamilyParams {
        w0,
        b,
        wmax: w0 + spare / shape_sum,
    };
    let mut weights: Vec<f64> = xs.iter().map(|&x| params.eval(x)).collect();
    if spare > 0.0 {
        absorb_drift(&mut weights);
    }
    Ok(ExponentialFamily {
        params,
        distribution: WealthDistribution::new(weights, w0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_spare_mass_is_flat() {
        for b in [-3.0, 0.5, 5.0] {
            let f = exponential_family(0.1, b, 10).unwrap();
            assert!((f.params.wmax - 0.1).abs() < 1e-15);
            assert!(f.distribution.weights().iter().all(|&w| (w - 0.1).abs() < 1e-15));
        }
    }

    #[test]
    fn small_b_is_a_linear_ramp() {
        let n = 10;
        let w0 = 0.02;
        let f = exponential_family(w0, 1e-9, n).unwrap();
        // linear ramp w0 + s x at midpoints with sum 1: s = 2 (1 - n w0) / n
        let slope = 2.0 * (1.0 - n as f64 * w0) / n as f64;
        for (k, &w) in f.distribution.weights().iter().enumerate() {
            let x = (k as f64 + 0.5) / n as f64;
            assert!((w - (w0 + slope * x)).abs() < 1e-9);
        }
    }

    #[test]
    fn too_high_floor_is_infeasible() {
        assert!(exponential_family(0.2, 1.0, 10).is_err());
        assert!(exponential_family(0.01, 0.0, 10).is_err());
    }

    #[test]
    fn richest_is_last() {
        let f = exponential_family(1.0 / 300.0, 5.0, 30).unwrap();
        let w = f.distribution.weights();
        assert!(f.distribution.is_sorted());
        assert_eq!(w.iter().cloned().fold(f64::MIN, f64::max), w[29]);
        assert!(f.params.wmax > w[29]);
    }
}
