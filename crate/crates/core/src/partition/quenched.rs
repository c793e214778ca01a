//! Quenched partition functions by dynamic programming over the last
//! renewal point.
//!
//! Both models reduce to log-domain convolutions of the form
//! L(n) = log Σ_{m<n} exp(v(m)) K(n−m). [`LogConv`] evaluates them with
//! blocks of 64 consecutive values sharing a reference exponent: inside a
//! block the sum is a plain dot product with K, and only the per-block
//! partial sums go through logsumexp. This keeps the O(N²) inner loop free of
//! transcendental calls while every term stays within range.
//!
//! For the copolymer the excursion weight ½(1 + e^{−2λ S(m,n)}) splits into a
//! sign-free part and a part that factorises through the prefix sums
//! P(n) = Σ_{j≤n}(ω_j + h), so two convolutions are run side by side.

use crate::numeric::{log_half_one_plus_exp, logaddexp};
use crate::renewal::RenewalLaw;
use crate::{Error, Result};

use super::{Boundary, CopolymerParams, PinningParams, MODULE};

const BLOCK: usize = 64;

/// Online log-sum-exp accumulator.
#[derive(Clone, Copy)]
struct Lse {
    max: f64,
    sum: f64,
}

impl Lse {
    fn new() -> Self {
        Lse {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    #[inline]
    fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// Incremental evaluation of log Σ_{m<n, n−m≤G} exp(v(m)) K(n−m).
pub(crate) struct LogConv<'a> {
    kernel: &'a [f64],
    log_kernel: Vec<f64>,
    vals: Vec<f64>,
    mant: Vec<f64>,
    block_ref: Vec<f64>,
}

impl<'a> LogConv<'a> {
    pub(crate) fn new(kernel: &'a [f64], capacity: usize) -> Self {
        let used = kernel.len().min(capacity.max(1));
        LogConv {
            kernel,
            log_kernel: kernel[..used].iter().map(|k| k.ln()).collect(),
            vals: Vec::with_capacity(capacity + 1),
            mant: Vec::with_capacity(capacity + 1),
            block_ref: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, v: f64) {
        self.vals.push(v);
        self.mant.push(0.0);
        let len = self.vals.len();
        if len.is_multiple_of(BLOCK) {
            let start = len - BLOCK;
            let r = self.vals[start..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for m in start..len {
                self.mant[m] = if r == f64::NEG_INFINITY {
                    0.0
                } else {
                    (self.vals[m] - r).exp()
                };
            }
            self.block_ref.push(r);
        }
    }

    /// Sum over all pushed m (indices 0..len) with target n = len.
    pub(crate) fn query(&self) -> f64 {
        let n = self.vals.len();
        let lo = n.saturating_sub(self.kernel.len());
        let mut acc = Lse::new();
        let full_blocks = self.block_ref.len();
        let first_block = lo / BLOCK;
        for b in first_block..full_blocks {
            let r = self.block_ref[b];
            if r == f64::NEG_INFINITY {
                continue;
            }
            let start = (b * BLOCK).max(lo);
            let end = (b + 1) * BLOCK;
            let mut s = 0.0;
            for m in start..end {
                s += self.mant[m] * self.kernel[n - m - 1];
            }
            if s > 0.0 {
                acc.add(r + s.ln());
            }
        }
        for m in (full_blocks * BLOCK).max(lo)..n {
            acc.add(self.vals[m] + self.log_kernel[n - m - 1]);
        }
        acc.value()
    }
}

fn check_len(omega: &[f64]) -> Result<()> {
    if omega.is_empty() {
        Err(Error::domain(MODULE, "disorder path must have N >= 1"))
    } else {
        Ok(())
    }
}

/// L(0..=N) for the constrained copolymer, L(n) = log Z_n with N ∈ τ at n.
pub fn copolymer_profile(omega: &[f64], law: &RenewalLaw, lambda: f64, h: f64) -> Vec<f64> {
    let n = omega.len();
    let c = 2.0 * lambda;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for w in omega {
        prefix.push(prefix.last().unwrap() + w + h);
    }
    let mut plain = LogConv::new(law.masses(), n);
    let mut shifted = LogConv::new(law.masses(), n);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    plain.push(0.0);
    shifted.push(0.0);
    let half = -std::f64::consts::LN_2;
    for &p in &prefix[1..=n] {
        let a = plain.query();
        let b = shifted.query();
        let l = logaddexp(half + a, half - c * p + b);
        out.push(l);
        plain.push(l);
        shifted.push(l + c * p);
    }
    out
}

/// log Z for the copolymer in the environment `omega`.
pub fn quenched_copolymer_logz(omega: &[f64], law: &RenewalLaw, p: &CopolymerParams) -> Result<f64> {
    check_len(omega)?;
    let profile = copolymer_profile(omega, law, p.lambda, p.h);
    Ok(finish_copolymer(&profile, omega, law, p))
}

fn finish_copolymer(profile: &[f64], omega: &[f64], law: &RenewalLaw, p: &CopolymerParams) -> f64 {
    let n = omega.len();
    match p.boundary {
        Boundary::Constrained => profile[n],
        Boundary::Free => {
            let c = 2.0 * p.lambda;
            let mut suffix = 0.0;
            let mut acc = Lse::new();
            // m runs down from N so the excursion sum S(m, N) accumulates
            for m in (0..=n).rev() {
                if m < n {
                    suffix += omega[m] + p.h;
                }
                let s = law.survival(n - m + 1);
                if s > 0.0 {
                    acc.add(profile[m] + s.ln() + log_half_one_plus_exp(-c * suffix));
                }
            }
            acc.value()
        }
    }
}

/// L(0..=N) for the constrained pinning model with site log-weights
/// `site[n-1]` collected at each contact n.
pub fn pinning_profile(site: &[f64], law: &RenewalLaw) -> Vec<f64> {
    let n = site.len();
    let mut conv = LogConv::new(law.masses(), n);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    conv.push(0.0);
    for k in 1..=n {
        let l = site[k - 1] + conv.query();
        out.push(l);
        conv.push(l);
    }
    out
}

fn finish_pinning(profile: &[f64], law: &RenewalLaw, boundary: Boundary) -> f64 {
    let n = profile.len() - 1;
    match boundary {
        Boundary::Constrained => profile[n],
        Boundary::Free => {
            let mut acc = Lse::new();
            for (m, l) in profile.iter().enumerate() {
                let s = law.survival(n - m + 1);
                if s > 0.0 {
                    acc.add(l + s.ln());
                }
            }
            acc.value()
        }
    }
}

/// log Z for the pinning model, contacts rewarded by βω_n + h.
pub fn quenched_pinning_logz(omega: &[f64], law: &RenewalLaw, p: &PinningParams) -> Result<f64> {
    check_len(omega)?;
    let site: Vec<f64> = omega.iter().map(|w| p.beta * w + p.h).collect();
    Ok(finish_pinning(&pinning_profile(&site, law), law, p.boundary))
}

/// log Z for contacts weighted by arbitrary per-site log-weights.
pub fn site_weight_pinning_logz(site: &[f64], law: &RenewalLaw, boundary: Boundary) -> Result<f64> {
    check_len(site)?;
    Ok(finish_pinning(&pinning_profile(site, law), law, boundary))
}

/// Copolymer profile at several `h` values sharing one environment.
pub fn quenched_copolymer_logz_many(omega: &[f64], law: &RenewalLaw, params: &[CopolymerParams]) -> Result<Vec<f64>> {
    check_len(omega)?;
    Ok(params
        .iter()
        .map(|p| finish_copolymer(&copolymer_profile(omega, law, p.lambda, p.h), omega, law, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::logsumexp;

    fn naive_conv(vals: &[f64], kernel: &[f64]) -> f64 {
        let n = vals.len();
        let terms: Vec<f64> = (0..n)
            .filter(|&m| n - m <= kernel.len())
            .map(|m| vals[m] + kernel[n - m - 1].ln())
            .collect();
        logsumexp(&terms)
    }

    #[test]
    fn blocked_conv_matches_naive() {
        let law = RenewalLaw::build(1.5, crate::renewal::LawVariant::Zeta, 150).unwrap();
        let mut conv = LogConv::new(law.masses(), 400);
        let mut vals = Vec::new();
        for i in 0..400 {
            let v = ((i * 37) % 101) as f64 * 3.0 - 150.0 + if i % 7 == 0 { f64::NEG_INFINITY } else { 0.0 };
            vals.push(v);
            conv.push(v);
            let want = naive_conv(&vals, law.masses());
            let got = conv.query();
            if want == f64::NEG_INFINITY {
                assert_eq!(got, want, "{i}");
                continue;
            }
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{i}: {got} vs {want}");
        }
    }

    #[test]
    fn single_site_closed_forms() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let omega = [0.7];
        let p = CopolymerParams::new(0.5, 0.1, Boundary::Constrained).unwrap();
        let want = (law.mass(1) * 0.5 * (1.0 + (-2.0f64 * 0.5 * 0.8).exp())).ln();
        assert!((quenched_copolymer_logz(&omega, &law, &p).unwrap() - want).abs() < 1e-14);
        let q = PinningParams::new(0.5, 0.1, Boundary::Constrained).unwrap();
        let want = 0.5 * 0.7 + 0.1 + law.mass(1).ln();
        assert!((quenched_pinning_logz(&omega, &law, &q).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn zero_coupling_gives_renewal_mass() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let omega: Vec<f64> = (0..300).map(|i| (i as f64 * 0.37).sin()).collect();
        let p = CopolymerParams::new(0.0, 0.3, Boundary::Constrained).unwrap();
        let u = law.renewal_mass(300).ln();
        assert!((quenched_copolymer_logz(&omega, &law, &p).unwrap() - u).abs() < 1e-12);
        let q = PinningParams::new(0.0, 0.0, Boundary::Constrained).unwrap();
        assert!((quenched_pinning_logz(&omega, &law, &q).unwrap() - u).abs() < 1e-12);
        let free = PinningParams::new(0.0, 0.0, Boundary::Free).unwrap();
        assert!(quenched_pinning_logz(&omega, &law, &free).unwrap().abs() < 1e-12);
    }
}
