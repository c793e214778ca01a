//! Localisation threshold by bisection in h.
//!
//! At each size N the point h counts as localised when the free-energy
//! statistic exceeds eps_F, three pooled standard errors (never below
//! [`EPS_FLOOR`]). The copolymer is localised below h_c and pinning above it.
//!
//! For the exact annealed route the statistic is the difference quotient
//! (log Z_N − log Z_{N/2})/(N − N/2). The boundary terms that make (1/N) log Z_N
//! sit O(log N / N) away from the limit cancel in it, so a threshold of zero
//! resolves h_a far more sharply than (1/N) log Z_N itself.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::disorder::GaussianSampler;
use crate::parallel::map_indexed;
use crate::partition::Boundary;
use crate::renewal::RenewalLaw;
use crate::rng;
use crate::stats::{LogMean, MeanSe};
use crate::{Error, Result};

use super::{annealed_profile, quenched_logz, Method, Polymer, MODULE};

pub const DEFAULT_N_SEQUENCE: [usize; 4] = [1024, 2048, 4096, 8192];
pub const EPS_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalStrategy {
    pub method: Method,
    pub n_sequence: Vec<usize>,
    pub replicas: usize,
    pub boundary: Boundary,
    pub h_lo: f64,
    pub h_hi: f64,
    /// Bisection stops once the bracket is no wider than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl CriticalStrategy {
    /// Quenched Monte Carlo over the default size sequence, free endpoint.
    pub fn quenched(h_lo: f64, h_hi: f64, seed: u64) -> Self {
        CriticalStrategy {
            method: Method::QuenchedMc,
            n_sequence: DEFAULT_N_SEQUENCE.to_vec(),
            replicas: 16,
            boundary: Boundary::Free,
            h_lo,
            h_hi,
            tolerance: (h_hi - h_lo) / 64.0,
            seed,
        }
    }

    /// Exact annealed values at a single size, constrained endpoint.
    pub fn annealed(h_lo: f64, h_hi: f64, n: usize) -> Self {
        CriticalStrategy {
            method: Method::AnnealedExact,
            n_sequence: vec![n],
            replicas: 0,
            boundary: Boundary::Constrained,
            h_lo,
            h_hi,
            tolerance: (h_hi - h_lo) * 1e-9,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub n: usize,
    pub h_lo: f64,
    pub h_hi: f64,
    /// Threshold used at the last bisection step.
    pub eps_f: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointEstimate {
    pub polymer: Polymer,
    pub coupling: f64,
    pub h_lo: f64,
    pub h_hi: f64,
    pub n_sequence: Vec<usize>,
    pub eps_f: f64,
    /// Midpoint of the bracket at the largest N.
    pub extrapolated: f64,
    pub brackets: Vec<Bracket>,
    pub notes: Vec<String>,
}

struct Probe<'a> {
    polymer: Polymer,
    law: &'a RenewalLaw,
    model: &'a CorrelationModel,
    coupling: f64,
    boundary: Boundary,
    method: Method,
    n: usize,
    paths: Vec<Vec<f64>>,
}

impl Probe<'_> {
    /// (statistic, eps_F) at h.
    fn eval(&self, h: f64) -> Result<(f64, f64)> {
        let nf = self.n as f64;
        match self.method {
            Method::AnnealedExact => {
                let prof = annealed_profile(self.polymer, self.model, self.law, self.coupling, h, self.n)?;
                let series = match self.boundary {
                    Boundary::Constrained => &prof.constrained,
                    Boundary::Free => &prof.free,
                };
                let half = self.n / 2;
                let q = (series[self.n - 1] - series[half - 1]) / (self.n - half) as f64;
                Ok((q, EPS_FLOOR))
            }
            Method::QuenchedMc | Method::AnnealedMc => {
                let logs: Vec<Result<f64>> = map_indexed(self.paths.len(), |r| {
                    quenched_logz(self.polymer, &self.paths[r], self.law, self.coupling, h, self.boundary)
                });
                let logs: Vec<f64> = logs.into_iter().collect::<Result<_>>()?;
                if self.method == Method::QuenchedMc {
                    let per_site: Vec<f64> = logs.iter().map(|l| l / nf).collect();
                    let m = MeanSe::from_samples(&per_site);
                    Ok((m.mean, (3.0 * m.stderr).max(EPS_FLOOR)))
                } else {
                    let lm = LogMean::from_logs(&logs);
                    Ok((lm.log_mean / nf, (3.0 * lm.rel_stderr / nf).max(EPS_FLOOR)))
                }
            }
        }
    }
}

pub fn critical_point(
    model: &CorrelationModel,
    law: &RenewalLaw,
    polymer: Polymer,
    coupling: f64,
    strategy: &CriticalStrategy,
) -> Result<CriticalPointEstimate> {
    if strategy.n_sequence.is_empty() {
        return Err(Error::domain(MODULE, "critical_point needs a nonempty N sequence"));
    }
    if !(strategy.h_lo < strategy.h_hi) || !(strategy.tolerance > 0.0) {
        return Err(Error::domain(
            MODULE,
            format!(
                "critical_point needs h_lo < h_hi and tolerance > 0, got [{}, {}] / {}",
                strategy.h_lo, strategy.h_hi, strategy.tolerance
            ),
        ));
    }
    if strategy.method != Method::AnnealedExact && strategy.replicas < 2 {
        return Err(Error::domain(MODULE, "critical_point needs at least 2 replicas for Monte Carlo methods"));
    }
    if strategy.n_sequence.iter().any(|&n| n < 2) {
        return Err(Error::domain(MODULE, "critical_point needs N >= 2"));
    }
    // copolymer: localised below h_c; pinning: localised above
    let low_side_localised = polymer == Polymer::Copolymer;
    let mut brackets = Vec::with_capacity(strategy.n_sequence.len());
    for &n in &strategy.n_sequence {
        let paths = if strategy.method == Method::AnnealedExact {
            Vec::new()
        } else {
            let sampler = GaussianSampler::new(model, n)?;
            let seed = rng::derive(strategy.seed, &format!("critical/{n}"));
            map_indexed(strategy.replicas, |r| sampler.sample(seed, r as u64, None).values)
        };
        let probe = Probe {
            polymer,
            law,
            model,
            coupling,
            boundary: strategy.boundary,
            method: strategy.method,
            n,
            paths,
        };
        let (mut lo, mut hi) = (strategy.h_lo, strategy.h_hi);
        let (f_lo, e_lo) = probe.eval(lo)?;
        let (f_hi, e_hi) = probe.eval(hi)?;
        let loc_lo = f_lo > e_lo;
        let loc_hi = f_hi > e_hi;
        if loc_lo != low_side_localised || loc_hi == low_side_localised {
            return Err(Error::domain(
                MODULE,
                format!(
                    "[{lo}, {hi}] does not bracket the {polymer} transition at N = {n}: \
                     statistic {f_lo:.6e} (eps {e_lo:.3e}) at h_lo, {f_hi:.6e} (eps {e_hi:.3e}) at h_hi"
                ),
            ));
        }
        let mut evaluations = 2;
        let mut eps = e_lo.max(e_hi);
        while hi - lo > strategy.tolerance {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (f, e) = probe.eval(mid)?;
            evaluations += 1;
            eps = e;
            if (f > e) == low_side_localised {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        brackets.push(Bracket {
            n,
            h_lo: lo,
            h_hi: hi,
            eps_f: eps,
            evaluations,
        });
    }
    let last = brackets.last().unwrap().clone();
    let mut notes = Vec::new();
    if brackets.len() >= 2 {
        let prev = &brackets[brackets.len() - 2];
        let drift = 0.5 * (last.h_lo + last.h_hi) - 0.5 * (prev.h_lo + prev.h_hi);
        notes.push(format!("midpoint moved by {drift:.6e} between N = {} and N = {}", prev.n, last.n));
        if drift.abs() > last.h_hi - last.h_lo {
            notes.push("finite-size drift exceeds the final bracket width".to_string());
        }
    }
    Ok(CriticalPointEstimate {
        polymer,
        coupling,
        h_lo: last.h_lo,
        h_hi: last.h_hi,
        n_sequence: strategy.n_sequence.clone(),
        eps_f: last.eps_f,
        extrapolated: 0.5 * (last.h_lo + last.h_hi),
        brackets,
        notes,
    })
}

/// h_a at one size from the exact transfer chain.
pub fn annealed_critical_point(
    model: &CorrelationModel,
    law: &RenewalLaw,
    polymer: Polymer,
    coupling: f64,
    n: usize,
    h_lo: f64,
    h_hi: f64,
) -> Result<CriticalPointEstimate> {
    critical_point(model, law, polymer, coupling, &CriticalStrategy::annealed(h_lo, h_hi, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_pinning_threshold_is_zero() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let mut s = CriticalStrategy::quenched(-0.5, 0.5, 1);
        s.n_sequence = vec![256];
        s.replicas = 4;
        s.tolerance = 1e-4;
        let est = critical_point(&m, &law, Polymer::Pinning, 0.0, &s).unwrap();
        assert!(est.h_lo <= 0.0 && 0.0 <= est.h_hi, "{est:?}");
    }

    #[test]
    fn non_bracketing_interval_is_reported() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let err = annealed_critical_point(&m, &law, Polymer::Copolymer, 0.5, 512, 1.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("does not bracket"), "{err}");
    }
}
