//! Expectation of the constrained copolymer partition function when the
//! environment on 1..=k is shifted in mean.
//!
//! With h = uλ and a shift of the environment that turns the linear term into
//! −2λ²(u − a)ΣΔ_i, the averaged weight is
//! E[exp(−2λ²(u−a)ΣΔ_i + 2λ²Σρ_{ij}Δ_iΔ_j) 1{k∈τ}], an annealed copolymer at
//! field λ(u − a) on k = ⌊t/λ²⌋ sites. As λ → 0 it approaches
//! (1/μ) exp(t(a − u + ½C_ρ^cop + ½Υ∞)).

use serde::{Deserialize, Serialize};

use crate::constants::{c_rho_cop, DEFAULT_TOL};
use crate::correlation::CorrelationModel;
use crate::renewal::{RenewalLaw, SignedTrajectory};
use crate::rng;
use crate::stats::LogMean;
use crate::{Error, Result};

use super::transfer::AnnealedTransferSpec;
use super::MODULE;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiltedExpectation {
    pub k: usize,
    pub value: f64,
    /// Relative standard error; zero for the exact transfer route.
    pub rel_stderr: f64,
    pub exact: bool,
    /// (1/μ) exp(t(a − u + ½C + ½Υ∞))
    pub limit: f64,
}

pub fn tilted_copolymer_expectation(
    model: &CorrelationModel,
    law: &RenewalLaw,
    lambda: f64,
    u: f64,
    a: f64,
    t: f64,
) -> Result<TiltedExpectation> {
    tilted_copolymer_expectation_mc(model, law, lambda, u, a, t, 20_000, 0)
}

/// As [`tilted_copolymer_expectation`], with the trajectory Monte Carlo
/// budget used when no exact route exists.
#[allow(clippy::too_many_arguments)]
pub fn tilted_copolymer_expectation_mc(
    model: &CorrelationModel,
    law: &RenewalLaw,
    lambda: f64,
    u: f64,
    a: f64,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<TiltedExpectation> {
    law.require_finite_mu("tilted_copolymer_expectation")?;
    if !(lambda > 0.0) || !(t > 0.0) {
        return Err(Error::domain(MODULE, "tilted expectation needs lambda > 0 and t > 0"));
    }
    let k = block_length(t, lambda);
    if k == 0 {
        return Err(Error::domain(MODULE, format!("k = floor(t/lambda^2) must be >= 1 (t = {t}, lambda = {lambda})")));
    }
    let cop = c_rho_cop(model, law, DEFAULT_TOL)?.value;
    let limit = (t * (a - u + 0.5 * cop + 0.5 * model.upsilon_infinity())).exp() / law.mu();
    let h = lambda * (u - a);
    match AnnealedTransferSpec::new(model, law) {
        Ok(spec) => {
            let prof = spec.copolymer(lambda, h, k)?;
            Ok(TiltedExpectation {
                k,
                value: prof.last_constrained().exp(),
                rel_stderr: 0.0,
                exact: true,
                limit,
            })
        }
        Err(Error::Capability { .. }) => {
            let r = model.truncation_radius();
            let rho = model.rho_seq(r + 1);
            let logs: Vec<f64> = crate::parallel::map_indexed(samples, |i| {
                let mut g = rng::stream(seed, i as u64);
                let traj = SignedTrajectory::sample(law, k, &mut g);
                if traj.contacts[k - 1] == 0 {
                    return f64::NEG_INFINITY;
                }
                let d: Vec<f64> = traj.delta.iter().map(|&x| x as f64).collect();
                let mut lin = 0.0;
                let mut quad = 0.0;
                for n in 0..k {
                    if d[n] == 0.0 {
                        continue;
                    }
                    lin += 1.0;
                    quad += 1.0;
                    for j in 1..=r.min(n) {
                        quad += 2.0 * rho[j] * d[n - j];
                    }
                }
                -2.0 * lambda * h * lin + 2.0 * lambda * lambda * quad
            });
            let lm = LogMean::from_logs(&logs);
            Ok(TiltedExpectation {
                k,
                value: lm.mean(),
                rel_stderr: lm.rel_stderr,
                exact: false,
                limit,
            })
        }
        Err(e) => Err(e),
    }
}

/// k = ⌊t/λ²⌋, ignoring rounding noise in t/λ² just below an integer.
pub fn block_length(t: f64, coupling: f64) -> usize {
    (t / (coupling * coupling) + 1e-9).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_form_with_matched_shift() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let r = tilted_copolymer_expectation(&m, &law, 0.3, 0.4, 0.4, 1.0).unwrap();
        let cop = c_rho_cop(&m, &law, 1e-12).unwrap().value;
        let want = (0.5 * cop + 0.7f64).exp() / law.mu();
        assert!((r.limit - want).abs() < 1e-12);
        assert!(r.exact);
        assert_eq!(r.k, 11);
    }
}
