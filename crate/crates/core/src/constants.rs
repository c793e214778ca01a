//! Closed-form constants coupling the correlations to the renewal law.
//!
//! Every series is truncated at a radius chosen from the analytic tail bound
//! of ρ and reported as a [`Bounded`] value. Beyond the truncation radius the
//! renewal factor is replaced by its long-range value (0 for κ, 1/μ for u)
//! with the worst-case deviation charged to the error.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::numeric::{bounded_max, Bounded, NeumaierSum};
use crate::renewal::RenewalLaw;
use crate::rng;
use crate::stats::MeanSe;
use crate::{Error, Result};

const MODULE: &str = "constants";

/// Default tolerance on the truncated series.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Upper limit on the radius used for C_ρ^pin, which needs u(n) explicitly.
const PIN_RADIUS_CAP: usize = 8192;

/// Smallest radius R with T(R) ≤ tol, capped.
fn radius_for(model: &CorrelationModel, tol: f64, cap: usize) -> usize {
    if let Some(r) = model.finite_range_radius() {
        return r.min(cap);
    }
    let mut r = 16usize;
    while r < cap && model.tail_bound(r) > tol {
        r *= 2;
    }
    if r >= cap {
        return cap;
    }
    // bisect down to the smallest admissible radius
    let (mut lo, mut hi) = (r / 2, r);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if model.tail_bound(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// C_ρ^cop = Σ_n ρ_n κ_n.
pub fn c_rho_cop(model: &CorrelationModel, law: &RenewalLaw, tol: f64) -> Result<Bounded> {
    law.require_finite_mu("C_rho^cop")?;
    // κ_n vanishes for n ≥ G, so the sum never needs to go further
    let r = radius_for(model, tol, law.support());
    let mut s = NeumaierSum::new();
    s.add(1.0);
    for n in 1..=r {
        s.add(2.0 * model.rho(n as i64) * law.kappa_unchecked(n));
    }
    let tail = if r >= law.support() {
        0.0
    } else {
        law.kappa_unchecked(r + 1) * model.tail_bound(r)
    };
    Ok(Bounded::new(s.total(), tail + 8.0 * f64::EPSILON * (r as f64 + 1.0)))
}

/// C_ρ^pin = Σ_n ρ_n P(|n| ∈ τ).
pub fn c_rho_pin(model: &CorrelationModel, law: &RenewalLaw, tol: f64) -> Result<Bounded> {
    let r = radius_for(model, tol, PIN_RADIUS_CAP);
    let u = law.renewal_masses(r);
    let mut s = NeumaierSum::new();
    s.add(1.0);
    for (n, un) in u.iter().enumerate().skip(1) {
        s.add(2.0 * model.rho(n as i64) * un);
    }
    // beyond r, u(n) is within max(1/μ, 1-1/μ) of its limit 1/μ
    let inv_mu = 1.0 / law.mu();
    let tail = model.tail_sum(r);
    s.add(inv_mu * tail.value);
    let err = model.tail_bound(r) * inv_mu.max(1.0 - inv_mu) + inv_mu * tail.error;
    Ok(Bounded::new(s.total(), err + 8.0 * f64::EPSILON * (r as f64 + 1.0)))
}

/// Slopes and constants for one (model, law) pair, each with an error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub alpha: f64,
    pub mu: f64,
    pub upsilon_inf: f64,
    pub upsilon_inf_err: f64,
    pub c_rho_cop: f64,
    pub c_rho_cop_err: f64,
    pub c_rho_pin: f64,
    pub c_rho_pin_err: f64,
    /// Υ∞/(1+α)
    pub monthus: f64,
    pub monthus_err: f64,
    /// max{Υ∞/(1+α), ½Υ∞/(1+α) + ½C_ρ^cop}
    pub cop_slope: f64,
    pub cop_slope_err: f64,
    /// (Υ∞/2μ) α/(1+α)
    pub pin_gap_slope: f64,
    pub pin_gap_slope_err: f64,
    /// −½C_ρ^pin
    pub pin_ann_slope: f64,
    pub pin_ann_slope_err: f64,
    /// Υ∞ + ½(C_ρ^cop − Υ∞)_+
    pub ann_cop_lb: f64,
    pub ann_cop_lb_err: f64,
    pub monthus_criterion_holds: bool,
}

pub fn slope_report(model: &CorrelationModel, law: &RenewalLaw) -> Result<SlopeReport> {
    slope_report_tol(model, law, DEFAULT_TOL)
}

pub fn slope_report_tol(model: &CorrelationModel, law: &RenewalLaw, tol: f64) -> Result<SlopeReport> {
    let alpha = law.alpha();
    let ups = model.upsilon_bounded();
    let cop = c_rho_cop(model, law, tol)?;
    let pin = c_rho_pin(model, law, tol)?;
    let monthus = ups * (1.0 / (1.0 + alpha));
    let second = monthus * 0.5 + cop * 0.5;
    let cop_slope = bounded_max(monthus, second);
    let mu = law.mu();
    let pin_gap = ups * (alpha / (1.0 + alpha) / (2.0 * mu));
    let pin_ann = pin * -0.5;
    let excess = bounded_max(cop - ups, Bounded::exact(0.0));
    let ann_lb = ups + excess * 0.5;
    Ok(SlopeReport {
        alpha,
        mu,
        upsilon_inf: ups.value,
        upsilon_inf_err: ups.error,
        c_rho_cop: cop.value,
        c_rho_cop_err: cop.error,
        c_rho_pin: pin.value,
        c_rho_pin_err: pin.error,
        monthus: monthus.value,
        monthus_err: monthus.error,
        cop_slope: cop_slope.value,
        cop_slope_err: cop_slope.error,
        pin_gap_slope: pin_gap.value,
        pin_gap_slope_err: pin_gap.error,
        pin_ann_slope: pin_ann.value,
        pin_ann_slope_err: pin_ann.error,
        ann_cop_lb: ann_lb.value,
        ann_cop_lb_err: ann_lb.error,
        monthus_criterion_holds: monthus.value > second.value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonthusCriterion {
    /// C_ρ^cop / Υ∞
    pub lhs: f64,
    /// 1/(1+α)
    pub threshold: f64,
    pub holds: bool,
    /// P(U ≥ |V|), available for nonnegative correlations.
    pub probability: Option<f64>,
}

pub fn monthus_criterion(model: &CorrelationModel, law: &RenewalLaw) -> Result<MonthusCriterion> {
    let cop = c_rho_cop(model, law, DEFAULT_TOL)?;
    let lhs = cop.value / model.upsilon_infinity();
    let threshold = 1.0 / (1.0 + law.alpha());
    let probability = if model.is_nonnegative() {
        Some(monthus_probability(model, law)?)
    } else {
        None
    };
    Ok(MonthusCriterion {
        lhs,
        threshold,
        holds: lhs < threshold,
        probability,
    })
}

/// P(U ≥ |V|) for independent U, V with P(U = n) = P(τ1 ≥ n+1)/μ on n ≥ 0
/// and P(V = n) = ρ_n/Υ∞ on ℤ, evaluated as a double sum over both mass
/// functions.
pub fn monthus_probability(model: &CorrelationModel, law: &RenewalLaw) -> Result<f64> {
    if !model.is_nonnegative() {
        return Err(Error::domain(
            MODULE,
            "the probabilistic form of the Monthus criterion needs nonnegative correlations",
        ));
    }
    law.require_finite_mu("monthus_probability")?;
    let ups = model.upsilon_infinity();
    let g = law.support();
    let r = radius_for(model, 1e-12, g);
    let mu = law.mu();
    // pmf of U on 0..G-1
    let pu: Vec<f64> = (0..g).map(|n| law.survival(n + 1) / mu).collect();
    let mut total = NeumaierSum::new();
    for v in 0..=r {
        let pv = if v == 0 { 1.0 } else { 2.0 * model.rho(v as i64) } / ups;
        let mut inner = NeumaierSum::new();
        for p in pu.iter().skip(v) {
            inner.add(*p);
        }
        total.add(pv * inner.total());
    }
    Ok(total.total())
}

/// Σ_{n,m=1}^{ℓ} ρ_{n-m} for a single excursion of length ℓ, from prefix
/// sums of ρ_d and d·ρ_d.
pub struct ExcursionPairSums {
    p0: Vec<f64>,
    p1: Vec<f64>,
}

impl ExcursionPairSums {
    pub fn new(model: &CorrelationModel, max_len: usize) -> Self {
        let mut p0 = vec![0.0; max_len + 1];
        let mut p1 = vec![0.0; max_len + 1];
        for d in 1..=max_len {
            let r = model.rho(d as i64);
            p0[d] = p0[d - 1] + r;
            p1[d] = p1[d - 1] + d as f64 * r;
        }
        ExcursionPairSums { p0, p1 }
    }

    pub fn get(&self, len: usize) -> f64 {
        let l = len as f64;
        l * (1.0 + 2.0 * self.p0[len - 1]) - 2.0 * self.p1[len - 1]
    }
}

/// Monte Carlo value of (1/μ) E[Σ_{n,m≤τ1} ρ_{nm}] from sampled excursions.
pub fn c_rho_cop_mc(model: &CorrelationModel, law: &RenewalLaw, samples: usize, seed: u64) -> Result<MeanSe> {
    law.require_finite_mu("C_rho^cop")?;
    let sums = ExcursionPairSums::new(model, law.support());
    let mu = law.mu();
    let mut rng = rng::stream(seed, 0);
    let xs: Vec<f64> = (0..samples).map(|_| sums.get(law.sample_gap(&mut rng)) / mu).collect();
    Ok(MeanSe::from_samples(&xs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iid_constants() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let r = slope_report(&CorrelationModel::iid(), &law).unwrap();
        assert_eq!(r.c_rho_cop, 1.0);
        assert_eq!(r.c_rho_pin, 1.0);
        assert!((r.cop_slope - 3.5 / 5.0).abs() < 1e-12);
        assert!(!r.monthus_criterion_holds);
    }

    #[test]
    fn finite_range_closed_forms() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let cop = c_rho_cop(&m, &law, 1e-12).unwrap();
        assert!((cop.value - (1.0 + 0.4 * (1.0 - 1.0 / law.mu()))).abs() < 1e-13);
        let pin = c_rho_pin(&m, &law, 1e-12).unwrap();
        assert!((pin.value - (1.0 + 0.4 * law.mass(1))).abs() < 1e-13);
    }

    #[test]
    fn pair_sums_match_direct() {
        let m = CorrelationModel::polynomial(2.0).unwrap();
        let s = ExcursionPairSums::new(&m, 50);
        for len in [1usize, 2, 7, 50] {
            let mut direct = 0.0;
            for i in 0..len {
                for j in 0..len {
                    direct += m.rho(i as i64 - j as i64);
                }
            }
            assert!((s.get(len) - direct).abs() < 1e-11);
        }
    }

    #[test]
    fn negative_correlation_rejects_probability() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, -0.3]).unwrap();
        assert!(monthus_probability(&m, &law).is_err());
        assert!(monthus_criterion(&m, &law).unwrap().probability.is_none());
    }
}
