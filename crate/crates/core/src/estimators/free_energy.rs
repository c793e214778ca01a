//! Free energy at a single parameter point.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::disorder::GaussianSampler;
use crate::parallel::map_indexed;
use crate::partition::Boundary;
use crate::renewal::RenewalLaw;
use crate::stats::{LogMean, MeanSe};
use crate::{Error, Result};

use super::{annealed_profile, quenched_logz, Method, Polymer, MODULE};

/// Smallest size accepted by [`free_energy`].
pub const MIN_SIZE: usize = 64;
/// Fewest replicas accepted by the Monte Carlo methods.
pub const MIN_REPLICAS: usize = 4;
/// Effective sample size below which an annealed Monte Carlo value is flagged.
pub const LOW_ESS: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyRequest {
    pub polymer: Polymer,
    pub coupling: f64,
    pub h: f64,
    pub boundary: Boundary,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyEstimate {
    /// Free energy per site, floored at zero.
    pub value: f64,
    pub stderr: f64,
    /// The size-N average of (1/N) log Z before flooring; it may be slightly
    /// negative because of the O(log N / N) boundary cost.
    pub finite_size_mean: f64,
    pub n: usize,
    pub replicas: usize,
    pub model: String,
    pub law: String,
    pub polymer: Polymer,
    pub coupling: f64,
    pub h: f64,
    pub boundary: Boundary,
    pub method: Method,
    pub effective_samples: Option<f64>,
    pub low_ess: bool,
}

pub fn free_energy(model: &CorrelationModel, law: &RenewalLaw, req: &FreeEnergyRequest) -> Result<FreeEnergyEstimate> {
    if req.n < MIN_SIZE {
        return Err(Error::domain(MODULE, format!("free_energy needs N >= {MIN_SIZE}, got {}", req.n)));
    }
    if req.method != Method::AnnealedExact && req.replicas < MIN_REPLICAS {
        return Err(Error::domain(
            MODULE,
            format!("{} needs replicas >= {MIN_REPLICAS}, got {}", req.method, req.replicas),
        ));
    }
    let nf = req.n as f64;
    let (mean, stderr, replicas, ess) = match req.method {
        Method::AnnealedExact => {
            let prof = annealed_profile(req.polymer, model, law, req.coupling, req.h, req.n)?;
            let l = match req.boundary {
                Boundary::Constrained => prof.last_constrained(),
                Boundary::Free => prof.last_free(),
            };
            (l / nf, 0.0, 0, None)
        }
        Method::QuenchedMc => {
            let logs = quenched_logz_samples(model, law, req.polymer, req.coupling, &[req.h], req.boundary, req.n, req.replicas, req.seed)?;
            let per_site: Vec<f64> = logs[0].iter().map(|l| l / nf).collect();
            let m = MeanSe::from_samples(&per_site);
            (m.mean, m.stderr, req.replicas, None)
        }
        Method::AnnealedMc => {
            let logs = quenched_logz_samples(model, law, req.polymer, req.coupling, &[req.h], req.boundary, req.n, req.replicas, req.seed)?;
            let lm = LogMean::from_logs(&logs[0]);
            (lm.log_mean / nf, lm.rel_stderr / nf, req.replicas, Some(lm.effective_samples))
        }
    };
    Ok(FreeEnergyEstimate {
        value: mean.max(0.0),
        stderr,
        finite_size_mean: mean,
        n: req.n,
        replicas,
        model: model.to_string(),
        law: law.spec_string(),
        polymer: req.polymer,
        coupling: req.coupling,
        h: req.h,
        boundary: req.boundary,
        method: req.method,
        effective_samples: ess,
        low_ess: ess.is_some_and(|e| e < LOW_ESS),
    })
}

/// log Z for every replica at every `h`, indexed `[h][replica]`. Each
/// replica draws one environment from `(seed, replica)` and reuses it across
/// the grid, so differences between grid points carry no sampling noise from
/// the environment.
#[allow(clippy::too_many_arguments)]
pub fn quenched_logz_samples(
    model: &CorrelationModel,
    law: &RenewalLaw,
    polymer: Polymer,
    coupling: f64,
    hs: &[f64],
    boundary: Boundary,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let sampler = GaussianSampler::new(model, n)?;
    let per_replica: Vec<Result<Vec<f64>>> = map_indexed(replicas, |r| {
        let path = sampler.sample(seed, r as u64, None);
        hs.iter()
            .map(|&h| quenched_logz(polymer, &path.values, law, coupling, h, boundary))
            .collect()
    });
    let mut out = vec![Vec::with_capacity(replicas); hs.len()];
    for row in per_replica {
        for (i, l) in row?.into_iter().enumerate() {
            out[i].push(l);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preconditions() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let mut req = FreeEnergyRequest {
            polymer: Polymer::Copolymer,
            coupling: 0.5,
            h: 0.1,
            boundary: Boundary::Free,
            n: 32,
            replicas: 8,
            seed: 1,
            method: Method::QuenchedMc,
        };
        assert!(free_energy(&m, &law, &req).is_err());
        req.n = 64;
        req.replicas = 3;
        assert!(free_energy(&m, &law, &req).is_err());
        req.method = Method::AnnealedExact;
        assert!(free_energy(&m, &law, &req).is_ok());
    }

    #[test]
    fn zero_coupling_pinning_at_zero_field() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let req = FreeEnergyRequest {
            polymer: Polymer::Pinning,
            coupling: 0.0,
            h: 0.0,
            boundary: Boundary::Free,
            n: 128,
            replicas: 4,
            seed: 3,
            method: Method::QuenchedMc,
        };
        let f = free_energy(&m, &law, &req).unwrap();
        assert!(f.finite_size_mean.abs() < 1e-12);
        assert_eq!(f.stderr, 0.0);
    }
}
