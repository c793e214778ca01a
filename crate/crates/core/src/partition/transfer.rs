//! Exact annealed partition functions for finite-range correlations.
//!
//! Averaging over a Gaussian environment with range R leaves a weight that
//! couples each site to the R sites before it. The polymer is then run as a
//! Markov chain on (age since last renewal, values of the last R sites),
//! renewing with the hazard K(a+1)/P(τ1 ≥ a+1). Once the age reaches the
//! window length the window is determined by the current sign (copolymer)
//! or is empty (pinning), so those states collapse to one or two per age.
//! Masses are renormalised every step and the scale is kept in log form.

use crate::correlation::CorrelationModel;
use crate::numeric::logsumexp;
use crate::renewal::RenewalLaw;
use crate::{Error, Result};

use super::MODULE;

/// Relative masses below this are dropped. They cannot move log Z at double
/// precision, and left alone they decay into subnormals, which are slow.
const FLUSH: f64 = 1e-300;

fn flush(x: f64) -> f64 {
    if x < FLUSH {
        0.0
    } else {
        x
    }
}

/// Largest correlation range handled by the transfer chain.
pub const MAX_TRANSFER_RADIUS: usize = 12;

pub struct AnnealedTransferSpec<'a> {
    model: &'a CorrelationModel,
    law: &'a RenewalLaw,
    radius: usize,
}

/// log Z_n for n = 1..=N under both boundary conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferProfile {
    pub constrained: Vec<f64>,
    pub free: Vec<f64>,
}

impl TransferProfile {
    /// log Z_N (constrained).
    pub fn last_constrained(&self) -> f64 {
        *self.constrained.last().unwrap()
    }

    pub fn last_free(&self) -> f64 {
        *self.free.last().unwrap()
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Copolymer,
    Pinning,
}

impl<'a> AnnealedTransferSpec<'a> {
    pub fn new(model: &'a CorrelationModel, law: &'a RenewalLaw) -> Result<Self> {
        let radius = model.finite_range_radius().ok_or_else(|| {
            Error::capability(
                MODULE,
                format!("annealed transfer needs a finite-range model, got `{model}`; use the disorder Monte Carlo route"),
            )
        })?;
        if radius > MAX_TRANSFER_RADIUS {
            return Err(Error::capability(
                MODULE,
                format!("annealed transfer supports range R <= {MAX_TRANSFER_RADIUS}, got R = {radius}"),
            ));
        }
        Ok(AnnealedTransferSpec { model, law, radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// E[exp(−2λ Σ(ω_n+h)Δ_n)] for n = 1..=N.
    pub fn copolymer(&self, lambda: f64, h: f64, n: usize) -> Result<TransferProfile> {
        check(lambda, h, n, "lambda")?;
        // log-weight of a site with value d given the window bits (sites n-1, n-2, ...)
        let r = self.radius;
        let table = self.site_table(|d, w| {
            if d == 0 {
                return 0.0;
            }
            let mut pair = 0.0;
            for j in 1..=r {
                pair += self.model.rho(j as i64) * ((w >> (j - 1)) & 1) as f64;
            }
            -2.0 * lambda * h + 2.0 * lambda * lambda * (1.0 + 2.0 * pair)
        });
        Ok(self.run(Kind::Copolymer, &table, n))
    }

    /// E[exp(Σ(βω_n+h)δ_n)] for n = 1..=N.
    pub fn pinning(&self, beta: f64, h: f64, n: usize) -> Result<TransferProfile> {
        check(beta, h, n, "beta")?;
        let r = self.radius;
        let table = self.site_table(|d, w| {
            if d == 0 {
                return 0.0;
            }
            let mut pair = 0.0;
            for j in 1..=r {
                pair += self.model.rho(j as i64) * ((w >> (j - 1)) & 1) as f64;
            }
            h + 0.5 * beta * beta * (1.0 + 2.0 * pair)
        });
        Ok(self.run(Kind::Pinning, &table, n))
    }

    fn window(&self) -> usize {
        self.radius.max(1)
    }

    /// exp(log-weight) indexed by [d][window].
    fn site_table(&self, f: impl Fn(u8, usize) -> f64) -> [Vec<f64>; 2] {
        let size = 1usize << self.window();
        [
            (0..size).map(|w| f(0, w).exp()).collect(),
            (0..size).map(|w| f(1, w).exp()).collect(),
        ]
    }

    fn run(&self, kind: Kind, table: &[Vec<f64>; 2], n: usize) -> TransferProfile {
        self.run_from(kind, table, n, None).0
    }

    fn run_from(&self, kind: Kind, table: &[Vec<f64>; 2], n: usize, init: Option<&[f64]>) -> (TransferProfile, Vec<f64>) {
        let rw = self.window();
        let size = 1usize << rw;
        let mask = size - 1;
        let law = self.law;
        let max_age = n + rw + init.map_or(0, |d| d.len()) + 1;
        let hazard: Vec<f64> = (0..=max_age).map(|a| law.hazard(a)).collect();
        let cont: Vec<f64> = (0..=max_age)
            .map(|a| {
                let s = law.survival(a + 1);
                if s > 0.0 {
                    law.survival(a + 2) / s
                } else {
                    0.0
                }
            })
            .collect();
        let all = |s: usize| if s == 1 { mask } else { 0 };
        // young[a * size + w] for ages a < rw; old[i][s] for age rw + i
        let mut young = vec![0.0; rw * size];
        let mut next_young = vec![0.0; rw * size];
        let mut old: Vec<[f64; 2]> = Vec::with_capacity(n + 1);
        match init {
            None => young[0] = 1.0,
            Some(dist) => {
                // pinning windows: the last contact sits `a` sites back
                for (a, &x) in dist.iter().enumerate() {
                    if a < rw {
                        young[a * size + (1 << a)] += x;
                    } else {
                        while old.len() <= a - rw {
                            old.push([0.0; 2]);
                        }
                        old[a - rw][0] += x;
                    }
                }
            }
        }
        let mut log_scale = 0.0;
        let mut constrained = Vec::with_capacity(n);
        let mut free = Vec::with_capacity(n);
        for _step in 0..n {
            next_young.iter_mut().for_each(|x| *x = 0.0);
            let mut new_old0 = [0.0f64; 2];
            // collapsed states age by one, or renew into age 0
            match kind {
                Kind::Copolymer => {
                    for s in 0..2 {
                        let w = table[s][all(s)];
                        let wp = all(s);
                        let mut ren = 0.0;
                        for (i, st) in old.iter().enumerate() {
                            ren += st[s] * hazard[rw + i];
                        }
                        next_young[((wp << 1) | s) & mask] += ren * w;
                    }
                    old.push([0.0; 2]);
                    for i in (0..old.len() - 1).rev() {
                        let c = cont[rw + i];
                        for s in 0..2 {
                            old[i + 1][s] = old[i][s] * c * table[s][all(s)];
                        }
                    }
                    old[0] = [0.0; 2];
                }
                Kind::Pinning => {
                    let w = table[1][0];
                    let mut ren = 0.0;
                    for (i, st) in old.iter().enumerate() {
                        ren += st[0] * hazard[rw + i];
                    }
                    next_young[1] += ren * w;
                    old.push([0.0; 2]);
                    for i in (0..old.len() - 1).rev() {
                        old[i + 1][0] = old[i][0] * cont[rw + i];
                    }
                    old[0] = [0.0; 2];
                }
            }
            for a in 0..rw {
                for w in 0..size {
                    let x = young[a * size + w];
                    if x == 0.0 {
                        continue;
                    }
                    match kind {
                        Kind::Copolymer => {
                            // a fresh excursion starts after a renewal with a fair sign
                            let (signs, p): (&[usize], f64) = if a == 0 {
                                (&[0, 1], 0.5)
                            } else {
                                (if w & 1 == 1 { &[1] } else { &[0] }, 1.0)
                            };
                            for &s in signs {
                                let y = x * p * table[s][w];
                                let wp = ((w << 1) | s) & mask;
                                next_young[wp] += y * hazard[a];
                                let stay = y * cont[a];
                                if a + 1 < rw {
                                    next_young[(a + 1) * size + wp] += stay;
                                } else {
                                    new_old0[s] += stay;
                                }
                            }
                        }
                        Kind::Pinning => {
                            next_young[((w << 1) | 1) & mask] += x * hazard[a] * table[1][w];
                            let stay = x * cont[a];
                            let wp = (w << 1) & mask;
                            if a + 1 < rw {
                                next_young[(a + 1) * size + wp] += stay;
                            } else {
                                new_old0[0] += stay;
                            }
                        }
                    }
                }
            }
            if old.is_empty() {
                old.push([0.0; 2]);
            }
            old[0] = new_old0;
            std::mem::swap(&mut young, &mut next_young);
            let total: f64 = young.iter().sum::<f64>() + old.iter().map(|s| s[0] + s[1]).sum::<f64>();
            let at_zero: f64 = young[..size].iter().sum();
            if total > 0.0 {
                log_scale += total.ln();
                let inv = 1.0 / total;
                young.iter_mut().for_each(|x| *x = flush(*x * inv));
                old.iter_mut().for_each(|s| {
                    s[0] = flush(s[0] * inv);
                    s[1] = flush(s[1] * inv);
                });
                while old.len() > 1 && old.last() == Some(&[0.0; 2]) {
                    old.pop();
                }
                constrained.push(log_scale + (at_zero * inv).ln());
                free.push(log_scale);
            } else {
                constrained.push(f64::NEG_INFINITY);
                free.push(f64::NEG_INFINITY);
            }
        }
        let mut ages = vec![0.0; rw + old.len()];
        for a in 0..rw {
            ages[a] = young[a * size..(a + 1) * size].iter().sum();
        }
        for (i, st) in old.iter().enumerate() {
            ages[rw + i] = st[0] + st[1];
        }
        (TransferProfile { constrained, free }, ages)
    }

    /// Runs the zero-coupling pinning chain for `steps` steps starting from
    /// the age distribution `init` and returns the resulting age marginal.
    /// With no weights the chain is the backward-recurrence chain itself.
    pub fn age_marginal_after(&self, init: &[f64], steps: usize) -> Vec<f64> {
        let table = self.site_table(|_, _| 0.0);
        self.run_from(Kind::Pinning, &table, steps, Some(init)).1
    }
}

impl AnnealedTransferSpec<'_> {
    /// log E⊗²[exp{κβ² Σ ρ_nm δ_n δ'_m + Σ_r (h Σ δ^r_n + ½β² Σ ρ_nm δ^r_n δ^r_m)}]
    /// for two independent renewals with free endpoints, n = 1..=N.
    ///
    /// The pair is run as the product of two single-replica chains; states
    /// with age at least the window collapse as in the one-replica case, so
    /// a step costs O((N + 2^R R)²).
    pub fn pinning_pair(&self, beta: f64, h: f64, kappa: f64, n: usize) -> Result<Vec<f64>> {
        check(beta, h, n, "beta")?;
        if !kappa.is_finite() {
            return Err(Error::domain(MODULE, "pair coupling must be finite"));
        }
        let rw = self.window();
        let size = 1usize << rw;
        let mask = size - 1;
        let r = self.radius;
        let law = self.law;
        let young = rw * size;
        let states = young + n + 1;
        let b2 = beta * beta;
        let rho: Vec<f64> = (0..=r).map(|j| self.model.rho(j as i64)).collect();
        let bits = |w: usize| -> f64 { (1..=r).map(|j| rho[j] * ((w >> (j - 1)) & 1) as f64).sum() };
        let window_of = |s: usize| if s < young { s % size } else { 0 };
        let age_of = |s: usize| if s < young { s / size } else { rw + (s - young) };
        // per-state window sums and the two moves (contact, stay)
        let wsum: Vec<f64> = (0..states).map(|s| bits(window_of(s))).collect();
        let single: Vec<f64> = wsum.iter().map(|p| h + 0.5 * b2 * (1.0 + 2.0 * p)).collect();
        let moves: Vec<[(usize, f64); 2]> = (0..states)
            .map(|s| {
                let a = age_of(s);
                let w = window_of(s);
                let hz = law.hazard(a);
                let sv = law.survival(a + 1);
                let cont = if sv > 0.0 { law.survival(a + 2) / sv } else { 0.0 };
                let contact = ((w << 1) | 1) & mask;
                let stay = if s < young {
                    if a + 1 < rw {
                        (a + 1) * size + ((w << 1) & mask)
                    } else {
                        young
                    }
                } else {
                    (s + 1).min(states - 1)
                };
                [(contact, hz), (stay, cont)]
            })
            .collect();
        let mut cur = vec![0.0; states * states];
        let mut next = vec![0.0; states * states];
        cur[0] = 1.0;
        let mut log_scale = 0.0;
        let mut out = Vec::with_capacity(n);
        for step in 0..n {
            next.iter_mut().for_each(|x| *x = 0.0);
            let live = (young + step + 1).min(states);
            for sa in 0..live {
                for sb in 0..live {
                    let x = cur[sa * states + sb];
                    if x == 0.0 {
                        continue;
                    }
                    for (da, &(ta, pa)) in moves[sa].iter().enumerate() {
                        if pa == 0.0 {
                            continue;
                        }
                        for (db, &(tb, pb)) in moves[sb].iter().enumerate() {
                            if pb == 0.0 {
                                continue;
                            }
                            // move 0 is a contact
                            let ca = da == 0;
                            let cb = db == 0;
                            let mut e = 0.0;
                            if ca {
                                e += single[sa] + kappa * b2 * wsum[sb];
                            }
                            if cb {
                                e += single[sb] + kappa * b2 * wsum[sa];
                            }
                            if ca && cb {
                                e += kappa * b2 * rho[0];
                            }
                            next[ta * states + tb] += x * pa * pb * e.exp();
                        }
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
            let total: f64 = cur.iter().sum();
            if total > 0.0 {
                log_scale += total.ln();
                let inv = 1.0 / total;
                cur.iter_mut().for_each(|x| *x = flush(*x * inv));
                out.push(log_scale);
            } else {
                out.push(f64::NEG_INFINITY);
            }
        }
        Ok(out)
    }
}

fn check(coupling: f64, h: f64, n: usize, name: &str) -> Result<()> {
    if !(coupling >= 0.0 && coupling.is_finite()) || !h.is_finite() {
        return Err(Error::domain(MODULE, format!("{name} must be finite and >= 0 and h finite")));
    }
    if n == 0 {
        return Err(Error::domain(MODULE, "N must be at least 1"));
    }
    Ok(())
}

/// Independent route for independent disorder: log E Z for the annealed
/// copolymer as a one-dimensional excursion recursion with per-excursion
/// weight ½(1 + exp((2λ² − 2λh)ℓ)).
pub fn annealed_copolymer_iid(law: &RenewalLaw, lambda: f64, h: f64, n: usize) -> Vec<f64> {
    let rate = 2.0 * lambda * lambda - 2.0 * lambda * h;
    let half = 0.5f64.ln();
    let mut l = vec![0.0; n + 1];
    for k in 1..=n {
        let terms: Vec<f64> = (k.saturating_sub(law.support())..k)
            .map(|m| {
                let len = (k - m) as f64;
                let sign_avg = half + crate::numeric::logaddexp(0.0, rate * len);
                l[m] + law.mass(k - m).ln() + sign_avg
            })
            .collect();
        l[k] = logsumexp(&terms);
    }
    l
}

/// Homogeneous pinning: log Z_n with reward `h` per contact, n = 0..=N.
pub fn homogeneous_pinning(law: &RenewalLaw, h: f64, n: usize) -> Vec<f64> {
    let mut l = vec![0.0; n + 1];
    for k in 1..=n {
        let terms: Vec<f64> = (k.saturating_sub(law.support())..k)
            .map(|m| l[m] + law.mass(k - m).ln())
            .collect();
        l[k] = h + logsumexp(&terms);
    }
    l
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling_is_renewal_mass() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let spec = AnnealedTransferSpec::new(&m, &law).unwrap();
        let prof = spec.copolymer(0.0, 0.4, 200).unwrap();
        for (k, l) in prof.constrained.iter().enumerate() {
            assert!((l - law.renewal_mass(k + 1).ln()).abs() < 1e-11);
        }
        assert!(prof.last_free().abs() < 1e-12);
        let pin = spec.pinning(0.0, 0.0, 200).unwrap();
        assert!((pin.last_constrained() - law.renewal_mass(200).ln()).abs() < 1e-11);
    }

    #[test]
    fn iid_copolymer_routes_agree() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let spec = AnnealedTransferSpec::new(&m, &law).unwrap();
        let prof = spec.copolymer(0.6, 0.5, 300).unwrap();
        let dp = annealed_copolymer_iid(&law, 0.6, 0.5, 300);
        for k in 1..=300 {
            assert!((prof.constrained[k - 1] - dp[k]).abs() < 1e-10 * dp[k].abs().max(1.0));
        }
    }

    #[test]
    fn iid_pinning_reduces_to_homogeneous() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let spec = AnnealedTransferSpec::new(&m, &law).unwrap();
        let prof = spec.pinning(0.7, -0.4, 250).unwrap();
        let dp = homogeneous_pinning(&law, -0.4 + 0.49 / 2.0, 250);
        assert!((prof.last_constrained() - dp[250]).abs() < 1e-10 * dp[250].abs());
    }

    #[test]
    fn stationary_age_law_is_invariant() {
        let law = RenewalLaw::build(1.5, crate::renewal::LawVariant::Zeta, 400).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let spec = AnnealedTransferSpec::new(&m, &law).unwrap();
        let pi: Vec<f64> = (0..400).map(|a| 2.0 * law.backward_chain_stationary(a).unwrap()).collect();
        let after = spec.age_marginal_after(&pi, 1);
        for (a, p) in pi.iter().enumerate() {
            assert!((after[a] - p).abs() < 1e-10);
        }
    }

    #[test]
    fn pair_without_cross_term_factorises() {
        let law = RenewalLaw::build(1.5, crate::renewal::LawVariant::Zeta, 500).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let spec = AnnealedTransferSpec::new(&m, &law).unwrap();
        let pair = spec.pinning_pair(0.4, -0.1, 0.0, 60).unwrap();
        let one = spec.pinning(0.4, -0.1, 60).unwrap();
        for k in 0..60 {
            assert!((pair[k] - 2.0 * one.free[k]).abs() < 1e-11 * pair[k].abs().max(1.0));
        }
    }

    #[test]
    fn pair_matches_enumeration() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2, -0.1]).unwrap();
        let spec = AnnealedTransferSpec::new(&m, &law).unwrap();
        let pair = spec.pinning_pair(0.5, -0.2, 6.0, 9).unwrap();
        for k in [1usize, 4, 9] {
            let want = super::super::enumerate_pair_oracle(&m, &law, 0.5, -0.2, 6.0, k).unwrap();
            assert!((pair[k - 1] - want).abs() < 1e-12 * want.abs().max(1.0), "{k}: {} vs {want}", pair[k - 1]);
        }
    }

    #[test]
    fn capability_errors() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let p = CorrelationModel::polynomial(2.0).unwrap();
        assert!(matches!(AnnealedTransferSpec::new(&p, &law), Err(Error::Capability { .. })));
        let mut rho = vec![1.0];
        rho.extend(std::iter::repeat_n(0.01, 13));
        let wide = CorrelationModel::finite_range(rho).unwrap();
        assert!(matches!(AnnealedTransferSpec::new(&wide, &law), Err(Error::Capability { .. })));
    }
}
