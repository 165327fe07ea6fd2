//! Sample means with standard errors.

use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    /// An exact value (zero error).
    pub fn exact(mean: f64) -> Self {
        Self {
            mean,
            stderr: 0.0,
            samples: 0,
        }
    }

    /// Mean and standard error of the mean, summed in slice order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            samples: n,
        }
    }

    /// Whether `|mean − target| <= k·stderr` (plus an absolute floor).
    pub fn within_sigma(&self, target: f64, k: f64, floor: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr + floor
    }

    /// Agreement of two independent estimates at `k` combined standard errors.
    pub fn agrees_with(&self, other: &Estimate, k: f64, floor: f64) -> bool {
        let combined = (self.stderr.powi(2) + other.stderr.powi(2)).sqrt();
        (self.mean - other.mean).abs() <= k * combined + floor
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        // sample variance 5/3, stderr sqrt(5/12)
        assert!((e.stderr - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(e.within_sigma(3.0, 1.0, 0.0));
        assert!(!e.within_sigma(4.0, 2.0, 0.0));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(Estimate::from_samples(&[]).mean.is_nan());
        assert_eq!(Estimate::from_samples(&[7.0]).stderr, 0.0);
    }
}
