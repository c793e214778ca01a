//! Fractional moments E[Z^ζ] of the constrained partition function.
//!
//! Z itself overflows on the block sizes of interest, so each replica
//! contributes ζ log Z and the mean is pooled with logsumexp.

use serde::{Deserialize, Serialize};

use crate::constants::{c_rho_cop, c_rho_pin, DEFAULT_TOL};
use crate::correlation::CorrelationModel;
use crate::disorder::GaussianSampler;
use crate::parallel::map_indexed;
use crate::partition::{block_length, Boundary};
use crate::renewal::RenewalLaw;
use crate::stats::LogMean;
use crate::{Error, Result};

use super::{quenched_logz, Polymer, MODULE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalMoment {
    pub polymer: Polymer,
    pub coupling: f64,
    pub h: f64,
    pub zeta: f64,
    pub k: usize,
    pub replicas: usize,
    pub log_mean: f64,
    pub mean: f64,
    pub stderr: f64,
    pub rel_stderr: f64,
    pub effective_samples: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn fractional_moment(
    model: &CorrelationModel,
    law: &RenewalLaw,
    polymer: Polymer,
    coupling: f64,
    h: f64,
    zeta: f64,
    k: usize,
    replicas: usize,
    seed: u64,
) -> Result<FractionalMoment> {
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::domain(MODULE, format!("fractional moment needs zeta in (0, 1], got {zeta}")));
    }
    if k == 0 || replicas == 0 {
        return Err(Error::domain(MODULE, "fractional moment needs k >= 1 and at least one replica"));
    }
    let sampler = GaussianSampler::new(model, k)?;
    let logs: Vec<Result<f64>> = map_indexed(replicas, |r| {
        let path = sampler.sample(seed, r as u64, None);
        quenched_logz(polymer, &path.values, law, coupling, h, Boundary::Constrained).map(|l| zeta * l)
    });
    let logs: Vec<f64> = logs.into_iter().collect::<Result<_>>()?;
    let lm = LogMean::from_logs(&logs);
    Ok(FractionalMoment {
        polymer,
        coupling,
        h,
        zeta,
        k,
        replicas,
        log_mean: lm.log_mean,
        mean: lm.mean(),
        stderr: lm.stderr(),
        rel_stderr: lm.rel_stderr,
        effective_samples: lm.effective_samples,
    })
}

/// Copolymer block at scale λ: h = uλ, k = ⌊t/λ²⌋.
pub fn copolymer_block(u: f64, t: f64, lambda: f64) -> (f64, usize) {
    (u * lambda, block_length(t, lambda))
}

/// Pinning block at scale β: h = (u − ½C_ρ^pin)β², k = ⌊t/β²⌋.
pub fn pinning_block(model: &CorrelationModel, law: &RenewalLaw, u: f64, t: f64, beta: f64) -> Result<(f64, usize)> {
    let pin = c_rho_pin(model, law, DEFAULT_TOL)?.value;
    Ok(((u - 0.5 * pin) * beta * beta, block_length(t, beta)))
}

/// exp(ζ(½C_ρ^cop + ½ζΥ∞ − u)t), the small-λ limit bound on the block.
pub fn copolymer_fractional_bound(model: &CorrelationModel, law: &RenewalLaw, zeta: f64, u: f64, t: f64) -> Result<f64> {
    let cop = c_rho_cop(model, law, DEFAULT_TOL)?.value;
    let ups = model.upsilon_infinity();
    Ok((zeta * (0.5 * cop + 0.5 * zeta * ups - u) * t).exp())
}

/// exp{(ζ/μ)(u − Υ∞(1−ζ)/(2μ)) t}, the small-β limit bound on the block.
pub fn pinning_fractional_bound(model: &CorrelationModel, law: &RenewalLaw, zeta: f64, u: f64, t: f64) -> Result<f64> {
    law.require_finite_mu("pinning_fractional_bound")?;
    let mu = law.mu();
    let ups = model.upsilon_infinity();
    Ok((zeta / mu * (u - ups * (1.0 - zeta) / (2.0 * mu)) * t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_one_at_zero_coupling_is_renewal_mass() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let f = fractional_moment(&m, &law, Polymer::Pinning, 0.0, 0.0, 1.0, 50, 8, 2).unwrap();
        assert!((f.mean - law.renewal_mass(50)).abs() < 1e-12);
        assert!(f.rel_stderr < 1e-6);
    }

    #[test]
    fn bounds_at_matching_u() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let cop = c_rho_cop(&m, &law, DEFAULT_TOL).unwrap().value;
        let u = 0.5 * cop + 0.5 * 0.6 * 1.4;
        assert!((copolymer_fractional_bound(&m, &law, 0.6, u, 4.0).unwrap() - 1.0).abs() < 1e-12);
        let u = 1.4 * 0.4 / (2.0 * law.mu());
        assert!((pinning_fractional_bound(&m, &law, 0.6, u, 4.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(copolymer_block(2.0, 4.0, 0.05), (0.1, 1600));
    }
}
