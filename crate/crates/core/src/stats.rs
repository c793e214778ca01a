//! Sample statistics used by the Monte Carlo estimators.

use serde::{Deserialize, Serialize};

use crate::numeric::{logsumexp, NeumaierSum};

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanSe {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl MeanSe {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return MeanSe {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mut s = NeumaierSum::new();
        s.extend(xs.iter().copied());
        let mean = s.total() / n as f64;
        let stderr = if n > 1 {
            let mut v = NeumaierSum::new();
            v.extend(xs.iter().map(|x| (x - mean) * (x - mean)));
            (v.total() / (n as f64 - 1.0) / n as f64).sqrt()
        } else {
            f64::INFINITY
        };
        MeanSe {
            mean,
            stderr,
            samples: n,
        }
    }

    /// Number of standard errors separating the mean from `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.mean == target {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - target).abs() / self.stderr
        }
    }
}

/// Batch-means estimate for the time average of a correlated series.
pub fn batch_means(xs: &[f64], batches: usize) -> MeanSe {
    let batches = batches.max(2).min(xs.len().max(2));
    let len = xs.len() / batches;
    if len == 0 {
        return MeanSe::from_samples(xs);
    }
    let means: Vec<f64> = (0..batches)
        .map(|b| xs[b * len..(b + 1) * len].iter().sum::<f64>() / len as f64)
        .collect();
    MeanSe::from_samples(&means)
}

/// Mean of `exp(log_values)` computed without overflow, reported on the
/// log scale alongside the effective sample size of the weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogMean {
    /// log of the sample mean of exp(x).
    pub log_mean: f64,
    /// standard error of the sample mean, divided by the mean itself.
    pub rel_stderr: f64,
    pub effective_samples: f64,
    pub samples: usize,
}

impl LogMean {
    pub fn from_logs(logs: &[f64]) -> Self {
        let n = logs.len();
        let lse = logsumexp(logs);
        let log_mean = lse - (n as f64).ln();
        // normalised weights w_i = exp(x_i - lse), sum to one
        let w: Vec<f64> = logs.iter().map(|x| (x - lse).exp()).collect();
        let sum_w2: f64 = w.iter().map(|x| x * x).sum();
        let ess = 1.0 / sum_w2;
        // Var(exp x)/mean^2 = n Σ w² - 1
        let rel_var = (n as f64 * sum_w2 - 1.0).max(0.0) * n as f64 / (n as f64 - 1.0).max(1.0);
        LogMean {
            log_mean,
            rel_stderr: (rel_var / n as f64).sqrt(),
            effective_samples: ess,
            samples: n,
        }
    }

    pub fn mean(&self) -> f64 {
        self.log_mean.exp()
    }

    pub fn stderr(&self) -> f64 {
        self.mean() * self.rel_stderr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_se_of_constant() {
        let m = MeanSe::from_samples(&[2.0; 10]);
        assert_eq!(m.mean, 2.0);
        assert_eq!(m.stderr, 0.0);
        assert_eq!(m.z_score(2.0), 0.0);
    }

    #[test]
    fn log_mean_matches_direct() {
        let xs = [0.1f64, -0.3, 1.2, 0.7];
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>() / 4.0;
        let lm = LogMean::from_logs(&xs);
        assert!((lm.mean() - direct).abs() < 1e-14);
        let plain = MeanSe::from_samples(&xs.iter().map(|x| x.exp()).collect::<Vec<_>>());
        assert!((lm.stderr() - plain.stderr).abs() < 1e-12);
    }

    #[test]
    fn log_mean_survives_overflow() {
        let lm = LogMean::from_logs(&[2000.0, 2000.0]);
        assert!((lm.log_mean - 2000.0).abs() < 1e-12);
        assert!((lm.effective_samples - 2.0).abs() < 1e-12);
    }
}
