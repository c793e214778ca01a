//! Weak-coupling lower bounds on F and the smoothing inequality near h_c.
//!
//! Both checks use the per-replica difference quotient
//! (log Z_N − log Z_{N/2})/(N − N/2) of the constrained profile, which drops
//! the O(log N / N) endpoint cost that (1/N) log Z_N carries. At λ = 0.1 and
//! N = 8192 that cost is of order 0.2 λ², larger than the tolerances used.

use serde::{Deserialize, Serialize};

use crate::constants::{c_rho_cop, c_rho_pin, DEFAULT_TOL};
use crate::correlation::CorrelationModel;
use crate::disorder::GaussianSampler;
use crate::parallel::map_indexed;
use crate::partition::quenched::{copolymer_profile, pinning_profile};
use crate::renewal::RenewalLaw;
use crate::stats::MeanSe;
use crate::{Error, Result};

use super::critical::CriticalPointEstimate;
use super::{Polymer, MODULE};

/// Mean and standard error of (log Z_N − log Z_{N/2})/(N − N/2) at each `h`,
/// one environment per replica shared across `hs`.
#[allow(clippy::too_many_arguments)]
pub fn quenched_increment(
    model: &CorrelationModel,
    law: &RenewalLaw,
    polymer: Polymer,
    coupling: f64,
    hs: &[f64],
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<MeanSe>> {
    if n < 2 || replicas < 2 {
        return Err(Error::domain(MODULE, "quenched increment needs N >= 2 and at least 2 replicas"));
    }
    let sampler = GaussianSampler::new(model, n)?;
    let half = n / 2;
    let span = (n - half) as f64;
    let rows: Vec<Vec<f64>> = map_indexed(replicas, |r| {
        let w = sampler.sample(seed, r as u64, None).values;
        hs.iter()
            .map(|&h| {
                let prof = match polymer {
                    Polymer::Copolymer => copolymer_profile(&w, law, coupling, h),
                    Polymer::Pinning => {
                        let site: Vec<f64> = w.iter().map(|x| coupling * x + h).collect();
                        pinning_profile(&site, law)
                    }
                };
                (prof[n] - prof[half]) / span
            })
            .collect()
    });
    Ok((0..hs.len())
        .map(|i| MeanSe::from_samples(&rows.iter().map(|r| r[i]).collect::<Vec<_>>()))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearBoundCheck {
    pub polymer: Polymer,
    pub coupling: f64,
    pub c: f64,
    pub h: f64,
    pub n: usize,
    /// F / coupling²
    pub scaled: f64,
    pub scaled_stderr: f64,
    /// ½C_ρ^cop − c, or (1/μ)[c + ½(C_ρ^pin − Υ∞/μ)]
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Checks F(λ, cλ)/λ² ≥ ½C_ρ^cop − c − slack (copolymer) or
/// F(β, cβ²)/β² ≥ (1/μ)[c + ½(C_ρ^pin − Υ∞/μ)] − slack (pinning), each up to
/// three standard errors.
#[allow(clippy::too_many_arguments)]
pub fn linear_bound_check(
    model: &CorrelationModel,
    law: &RenewalLaw,
    polymer: Polymer,
    coupling: f64,
    c: f64,
    slack: f64,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<LinearBoundCheck> {
    if !(coupling > 0.0) {
        return Err(Error::domain(MODULE, "linear bound needs a positive coupling"));
    }
    law.require_finite_mu("linear_bound_check")?;
    let (h, bound) = match polymer {
        Polymer::Copolymer => (c * coupling, 0.5 * c_rho_cop(model, law, DEFAULT_TOL)?.value - c),
        Polymer::Pinning => {
            let mu = law.mu();
            let pin = c_rho_pin(model, law, DEFAULT_TOL)?.value;
            (c * coupling * coupling, (c + 0.5 * (pin - model.upsilon_infinity() / mu)) / mu)
        }
    };
    let f = quenched_increment(model, law, polymer, coupling, &[h], n, replicas, seed)?[0];
    let s2 = coupling * coupling;
    let scaled = f.mean / s2;
    let scaled_stderr = f.stderr / s2;
    Ok(LinearBoundCheck {
        polymer,
        coupling,
        c,
        h,
        n,
        scaled,
        scaled_stderr,
        bound,
        slack,
        pass: scaled + 3.0 * scaled_stderr >= bound - slack,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingRow {
    pub delta: f64,
    pub h: f64,
    pub f: f64,
    pub f_stderr: f64,
    /// (1+α)/(2Υ∞) δ², divided by β² for pinning
    pub bound: f64,
    /// K(δ + w/2 + r)² − K δ²
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingCheck {
    pub polymer: Polymer,
    pub coupling: f64,
    pub h_c: f64,
    pub bracket_width: f64,
    pub eps_f: f64,
    /// √(eps_F/K)
    pub resolution: f64,
    pub n: usize,
    pub rows: Vec<SmoothingRow>,
}

/// F at ĥ_c − δ (copolymer) or ĥ_c + δ (pinning) against the smoothing
/// bound K δ², K = (1+α)/(2Υ∞) (over β² for pinning).
///
/// The bisection only resolves F above eps_F, so the true h_c may sit past
/// the bracket by the distance r = √(eps_F/K) over which a free energy
/// saturating the bound stays below eps_F. The check therefore uses the
/// worst-case offset δ + w/2 + r, with w the bracket width, and allows three
/// standard errors on F.
#[allow(clippy::too_many_arguments)]
pub fn smoothing_check(
    model: &CorrelationModel,
    law: &RenewalLaw,
    estimate: &CriticalPointEstimate,
    deltas: &[f64],
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<SmoothingCheck> {
    let polymer = estimate.polymer;
    let coupling = estimate.coupling;
    let ups = model.upsilon_infinity();
    if !(ups > 0.0) || !(coupling > 0.0) {
        return Err(Error::domain(MODULE, "smoothing check needs Υ∞ > 0 and a positive coupling"));
    }
    let scale = match polymer {
        Polymer::Copolymer => 1.0,
        Polymer::Pinning => 1.0 / (coupling * coupling),
    };
    let k = (1.0 + law.alpha()) / (2.0 * ups) * scale;
    let w = estimate.h_hi - estimate.h_lo;
    let hc = estimate.extrapolated;
    let resolution = (estimate.eps_f / k).sqrt();
    let hs: Vec<f64> = deltas
        .iter()
        .map(|d| match polymer {
            Polymer::Copolymer => hc - d,
            Polymer::Pinning => hc + d,
        })
        .collect();
    let fs = quenched_increment(model, law, polymer, coupling, &hs, n, replicas, seed)?;
    let rows = deltas
        .iter()
        .zip(&hs)
        .zip(&fs)
        .map(|((&d, &h), f)| {
            let bound = k * d * d;
            let slack = k * ((d + 0.5 * w + resolution).powi(2) - d * d);
            SmoothingRow {
                delta: d,
                h,
                f: f.mean,
                f_stderr: f.stderr,
                bound,
                slack,
                pass: f.mean - 3.0 * f.stderr <= bound + slack,
            }
        })
        .collect();
    Ok(SmoothingCheck {
        polymer,
        coupling,
        h_c: hc,
        bracket_width: w,
        eps_f: estimate.eps_f,
        resolution,
        n,
        rows,
    })
}
