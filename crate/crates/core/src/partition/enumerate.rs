//! Brute-force partition functions: every renewal set in {1..N} and, for the
//! copolymer, every sign vector, summed term by term.

use crate::correlation::CorrelationModel;
use crate::numeric::NeumaierSum;
use crate::renewal::RenewalLaw;
use crate::{Error, Result};

use super::{Boundary, MODULE};

pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Clone, Debug)]
pub enum OracleKind<'a> {
    QuenchedCopolymer { omega: &'a [f64], lambda: f64, h: f64 },
    QuenchedPinning { omega: &'a [f64], beta: f64, h: f64 },
    AnnealedCopolymer { model: &'a CorrelationModel, lambda: f64, h: f64 },
    AnnealedPinning { model: &'a CorrelationModel, beta: f64, h: f64 },
}

/// log Z by exhaustive summation.
pub fn enumerate_oracle(kind: &OracleKind, law: &RenewalLaw, n: usize, boundary: Boundary) -> Result<f64> {
    if n == 0 || n > ENUMERATION_LIMIT {
        return Err(Error::capability(
            MODULE,
            format!("enumeration budget is 1 <= N <= {ENUMERATION_LIMIT}, got {n}"),
        ));
    }
    if let OracleKind::QuenchedCopolymer { omega, .. } | OracleKind::QuenchedPinning { omega, .. } = kind {
        if omega.len() < n {
            return Err(Error::domain(MODULE, "environment shorter than N"));
        }
    }
    let mut e = Enumerator {
        kind,
        law,
        n,
        boundary,
        sites: vec![0u8; n + 1],
        total: NeumaierSum::new(),
    };
    e.extend(0, 0.0, 1.0);
    Ok(e.total.total().ln())
}

struct Enumerator<'a, 'b> {
    kind: &'a OracleKind<'b>,
    law: &'a RenewalLaw,
    n: usize,
    boundary: Boundary,
    // Δ_n (copolymer) or δ_n (pinning), index n
    sites: Vec<u8>,
    total: NeumaierSum,
}

impl Enumerator<'_, '_> {
    /// `pos` is the last renewal point; `energy` the exponent so far and
    /// `prob` the renewal probability so far.
    fn extend(&mut self, pos: usize, energy: f64, prob: f64) {
        let copolymer = matches!(
            self.kind,
            OracleKind::QuenchedCopolymer { .. } | OracleKind::AnnealedCopolymer { .. }
        );
        for next in pos + 1..=self.n {
            let k = self.law.mass(next - pos);
            if k == 0.0 {
                continue;
            }
            if copolymer {
                for sign in 0..2u8 {
                    let e = energy + self.fill_excursion(pos, next, sign);
                    self.close(next, e, prob * k * 0.5);
                }
            } else {
                for site in pos + 1..next {
                    self.sites[site] = 0;
                }
                self.sites[next] = 1;
                let e = energy + self.site_energy(next);
                self.close(next, e, prob * k);
            }
        }
        if self.boundary == Boundary::Free && pos < self.n {
            // last excursion left open at N
            let s = self.law.survival(self.n - pos + 1);
            if s == 0.0 {
                return;
            }
            if copolymer {
                for sign in 0..2u8 {
                    let e = energy + self.fill_excursion(pos, self.n, sign);
                    self.total.add((e).exp() * prob * s * 0.5);
                }
            } else {
                for site in pos + 1..=self.n {
                    self.sites[site] = 0;
                }
                self.total.add(energy.exp() * prob * s);
            }
        }
    }

    fn close(&mut self, next: usize, energy: f64, prob: f64) {
        if next == self.n {
            self.total.add(energy.exp() * prob);
        } else {
            self.extend(next, energy, prob);
        }
    }

    /// Sets Δ on (pos, end] and returns the energy contributed by those sites.
    fn fill_excursion(&mut self, pos: usize, end: usize, sign: u8) -> f64 {
        let mut e = 0.0;
        for site in pos + 1..=end {
            self.sites[site] = sign;
            e += self.site_energy(site);
        }
        e
    }

    /// Energy of site n given the values on sites < n.
    fn site_energy(&self, site: usize) -> f64 {
        let d = self.sites[site] as f64;
        if d == 0.0 {
            return 0.0;
        }
        match self.kind {
            OracleKind::QuenchedCopolymer { omega, lambda, h } => -2.0 * lambda * (omega[site - 1] + h),
            OracleKind::QuenchedPinning { omega, beta, h } => beta * omega[site - 1] + h,
            OracleKind::AnnealedCopolymer { model, lambda, h } => {
                // −2λh Δ_n + 2λ² (ρ_0 Δ_n + 2 Σ_{m<n} ρ_{n−m} Δ_n Δ_m)
                let mut pair = 0.0;
                for m in 1..site {
                    pair += model.rho((site - m) as i64) * self.sites[m] as f64;
                }
                -2.0 * lambda * h + 2.0 * lambda * lambda * (1.0 + 2.0 * pair)
            }
            OracleKind::AnnealedPinning { model, beta, h } => {
                let mut pair = 0.0;
                for m in 1..site {
                    pair += model.rho((site - m) as i64) * self.sites[m] as f64;
                }
                h + 0.5 * beta * beta * (1.0 + 2.0 * pair)
            }
        }
    }
}

/// Largest N for the two-replica enumeration (4^N terms).
pub const PAIR_ENUMERATION_LIMIT: usize = 14;

/// log E⊗²[exp{κβ² Σ ρ_nm δ_n δ'_m + Σ_r (h Σ δ^r_n + ½β² Σ ρ_nm δ^r_n δ^r_m)}]
/// with free endpoints, by summing over every pair of contact sets.
pub fn enumerate_pair_oracle(
    model: &CorrelationModel,
    law: &RenewalLaw,
    beta: f64,
    h: f64,
    kappa: f64,
    n: usize,
) -> Result<f64> {
    if n == 0 || n > PAIR_ENUMERATION_LIMIT {
        return Err(Error::capability(
            MODULE,
            format!("pair enumeration budget is 1 <= N <= {PAIR_ENUMERATION_LIMIT}, got {n}"),
        ));
    }
    let rho: Vec<f64> = (0..n).map(|j| model.rho(j as i64)).collect();
    let b2 = beta * beta;
    // bit i of a set is site i + 1
    let mut sets = Vec::with_capacity(1 << n);
    for set in 0u32..(1u32 << n) {
        let mut prob = 1.0;
        let mut last = 0usize;
        for i in 0..n {
            if set >> i & 1 == 1 {
                prob *= law.mass(i + 1 - last);
                last = i + 1;
            }
        }
        prob *= law.survival(n - last + 1);
        if prob == 0.0 {
            continue;
        }
        let count = set.count_ones() as f64;
        let mut own = rho[0] * count;
        for (j, r) in rho.iter().enumerate().skip(1) {
            own += 2.0 * r * (set & (set >> j)).count_ones() as f64;
        }
        sets.push((set, prob.ln() + h * count + 0.5 * b2 * own));
    }
    let mut total = NeumaierSum::new();
    for &(a, la) in &sets {
        for &(b, lb) in &sets {
            let mut cross = rho[0] * (a & b).count_ones() as f64;
            for (j, r) in rho.iter().enumerate().skip(1) {
                cross += r * ((a & (b >> j)).count_ones() + (b & (a >> j)).count_ones()) as f64;
            }
            total.add((la + lb + kappa * b2 * cross).exp());
        }
    }
    Ok(total.total().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_forms() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let omega = [0.3];
        let k = OracleKind::QuenchedCopolymer {
            omega: &omega,
            lambda: 0.4,
            h: 0.2,
        };
        let want = (law.mass(1) * 0.5 * (1.0 + (-0.8f64 * 0.5).exp())).ln();
        assert!((enumerate_oracle(&k, &law, 1, Boundary::Constrained).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn three_site_pinning_by_hand() {
        // compositions of 3: (3), (1,2), (2,1), (1,1,1)
        let law = RenewalLaw::zeta(1.5).unwrap();
        let omega = [0.1, -0.2, 0.5];
        let (b, h) = (0.6, -0.1f64);
        let w = |i: usize| (b * omega[i - 1] + h).exp();
        let k = |n: usize| law.mass(n);
        let want = k(3) * w(3) + k(1) * k(2) * w(1) * w(3) + k(2) * k(1) * w(2) * w(3) + k(1).powi(3) * w(1) * w(2) * w(3);
        let kind = OracleKind::QuenchedPinning { omega: &omega, beta: b, h };
        let got = enumerate_oracle(&kind, &law, 3, Boundary::Constrained).unwrap();
        assert!((got - want.ln()).abs() < 1e-14);
    }

    #[test]
    fn budget_enforced() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let kind = OracleKind::AnnealedPinning { model: &m, beta: 0.1, h: 0.0 };
        assert!(enumerate_oracle(&kind, &law, 21, Boundary::Constrained).is_err());
    }
}
