//! Heavy-tailed renewal laws and signed trajectories.
//!
//! Masses are stored for n = 1..G and sum to one, so every law is recurrent
//! with a finite mean. For the `Zeta` variant the finite support is an
//! approximation of the untruncated law n^{-(1+α)}/ζ(1+α) and the report
//! carries the truncation error on μ; `ZetaTruncated` takes the finite law
//! as the object of study.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::{power_tail, Bounded, NeumaierSum};
use crate::rng::{self, StreamRng};
use crate::{Error, Result};

const MODULE: &str = "renewal";

pub const DEFAULT_SUPPORT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawVariant {
    Zeta,
    ZetaTruncated,
    Custom,
}

/// Everything needed to rebuild a law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum LawSpec {
    Zeta { alpha: f64, support: usize },
    ZetaTruncated { alpha: f64, support: usize },
    /// K(1) = head, remaining mass spread as n^{-(1+α)} over 2..=G.
    Head { head: f64, alpha: f64, support: usize },
    Custom { alpha: f64, masses: Vec<f64> },
}

pub struct RenewalLaw {
    spec: LawSpec,
    alpha: f64,
    variant: LawVariant,
    masses: Vec<f64>,
    cdf: Vec<f64>,
    // survival[n] = P(τ1 ≥ n) for n = 0..=G+1
    survival: Vec<f64>,
    // tail_survival[j] = Σ_{k≥j} P(τ1 ≥ k+1) for j = 0..=G
    tail_survival: Vec<f64>,
    mu: f64,
    mu_relative_error: f64,
    mu_unreliable: bool,
    u_memo: RwLock<Vec<f64>>,
}

impl Clone for RenewalLaw {
    fn clone(&self) -> Self {
        RenewalLaw {
            spec: self.spec.clone(),
            alpha: self.alpha,
            variant: self.variant,
            masses: self.masses.clone(),
            cdf: self.cdf.clone(),
            survival: self.survival.clone(),
            tail_survival: self.tail_survival.clone(),
            mu: self.mu,
            mu_relative_error: self.mu_relative_error,
            mu_unreliable: self.mu_unreliable,
            u_memo: RwLock::new(self.u_memo.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for RenewalLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RenewalLaw")
            .field("spec", &self.spec_string())
            .field("mu", &self.mu)
            .field("mu_unreliable", &self.mu_unreliable)
            .finish()
    }
}

impl PartialEq for RenewalLaw {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl RenewalLaw {
    pub fn build(alpha: f64, variant: LawVariant, support: usize) -> Result<Self> {
        match variant {
            LawVariant::Zeta => Self::from_spec(LawSpec::Zeta { alpha, support }),
            LawVariant::ZetaTruncated => Self::from_spec(LawSpec::ZetaTruncated { alpha, support }),
            LawVariant::Custom => Err(Error::domain(MODULE, "custom laws are built from explicit masses")),
        }
    }

    pub fn zeta(alpha: f64) -> Result<Self> {
        Self::build(alpha, LawVariant::Zeta, DEFAULT_SUPPORT)
    }

    pub fn with_head(head: f64, alpha: f64, support: usize) -> Result<Self> {
        Self::from_spec(LawSpec::Head { head, alpha, support })
    }

    pub fn custom(alpha: f64, masses: Vec<f64>) -> Result<Self> {
        Self::from_spec(LawSpec::Custom { alpha, masses })
    }

    pub fn from_spec(spec: LawSpec) -> Result<Self> {
        let (alpha, variant, raw) = match &spec {
            LawSpec::Zeta { alpha, support } | LawSpec::ZetaTruncated { alpha, support } => {
                check_alpha(*alpha)?;
                check_support(*support)?;
                let v = if matches!(spec, LawSpec::Zeta { .. }) {
                    LawVariant::Zeta
                } else {
                    LawVariant::ZetaTruncated
                };
                (*alpha, v, power_masses(*alpha, 1, *support))
            }
            LawSpec::Head { head, alpha, support } => {
                check_alpha(*alpha)?;
                check_support(*support)?;
                if !(*head > 0.0 && *head < 1.0) {
                    return Err(Error::domain(MODULE, format!("head mass K(1) must lie in (0,1), got {head}")));
                }
                let mut m = vec![0.0; *support];
                m[0] = *head;
                let rest = power_masses(*alpha, 2, *support);
                let z: f64 = rest.iter().sum();
                for (slot, r) in m.iter_mut().zip(&rest).skip(1) {
                    *slot = r / z * (1.0 - head);
                }
                (*alpha, LawVariant::Custom, m)
            }
            LawSpec::Custom { alpha, masses } => {
                check_alpha(*alpha)?;
                if masses.is_empty() {
                    return Err(Error::domain(MODULE, "custom law needs at least one mass"));
                }
                if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
                    return Err(Error::domain(MODULE, "custom masses must be finite and nonnegative"));
                }
                (*alpha, LawVariant::Custom, masses.clone())
            }
        };
        Ok(Self::from_raw(spec, alpha, variant, raw))
    }

    fn from_raw(spec: LawSpec, alpha: f64, variant: LawVariant, raw: Vec<f64>) -> Self {
        let mut total = NeumaierSum::new();
        total.extend(raw.iter().copied());
        let z = total.total();
        let masses: Vec<f64> = raw.iter().map(|m| m / z).collect();
        let g = masses.len();
        // survival from the top down so small tails keep full precision
        let mut survival = vec![0.0; g + 2];
        let mut acc = NeumaierSum::new();
        for n in (1..=g).rev() {
            acc.add(masses[n - 1]);
            survival[n] = acc.total();
        }
        survival[1] = 1.0;
        survival[0] = 1.0;
        let mut cdf = Vec::with_capacity(g);
        for n in 1..=g {
            cdf.push(1.0 - survival[n + 1]);
        }
        let mut tail_survival = vec![0.0; g + 1];
        let mut acc = NeumaierSum::new();
        for j in (0..=g).rev() {
            acc.add(survival[j + 1]);
            tail_survival[j] = acc.total();
        }
        let mu = tail_survival[0];
        let (mu_relative_error, mu_unreliable) = match variant {
            LawVariant::Zeta if alpha > 1.0 => {
                let exact = power_tail(alpha, 1).value / power_tail(1.0 + alpha, 1).value;
                ((mu - exact).abs() / exact, false)
            }
            LawVariant::Zeta => (f64::INFINITY, true),
            _ => (0.0, false),
        };
        RenewalLaw {
            spec,
            alpha,
            variant,
            masses,
            cdf,
            survival,
            tail_survival,
            mu,
            mu_relative_error,
            mu_unreliable,
            u_memo: RwLock::new(vec![1.0]),
        }
    }

    pub fn spec(&self) -> &LawSpec {
        &self.spec
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn variant(&self) -> LawVariant {
        self.variant
    }

    /// Largest n with K(n) stored.
    pub fn support(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// K(n); zero outside 1..=G.
    pub fn mass(&self, n: usize) -> f64 {
        if n == 0 || n > self.masses.len() {
            0.0
        } else {
            self.masses[n - 1]
        }
    }

    /// P(τ1 ≥ n).
    pub fn survival(&self, n: usize) -> f64 {
        self.survival.get(n).copied().unwrap_or(0.0)
    }

    /// Mean of the stored law.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// |μ_G − μ_∞| / μ_∞ against the untruncated zeta law; zero for laws
    /// that are finite by definition, infinite when μ_∞ = ∞.
    pub fn mu_relative_error(&self) -> f64 {
        self.mu_relative_error
    }

    pub fn mu_unreliable(&self) -> bool {
        self.mu_unreliable
    }

    /// Set when the support cutoff shifts μ by more than 1e-3 relative.
    pub fn truncation_warning(&self) -> bool {
        self.mu_relative_error > 1e-3
    }

    /// Untruncated mean ζ(α)/ζ(1+α) for the zeta family with α > 1.
    pub fn untruncated_mu(&self) -> Option<Bounded> {
        match self.spec {
            LawSpec::Zeta { alpha, .. } | LawSpec::ZetaTruncated { alpha, .. } if alpha > 1.0 => {
                Some(power_tail(alpha, 1) / power_tail(1.0 + alpha, 1))
            }
            _ => None,
        }
    }

    pub(crate) fn require_finite_mu(&self, what: &str) -> Result<()> {
        if self.mu_unreliable {
            Err(Error::domain(
                MODULE,
                format!(
                    "{what} needs a finite mean but the zeta law with alpha = {} has infinite mean; use zeta-trunc to study the truncated law",
                    self.alpha
                ),
            ))
        } else {
            Ok(())
        }
    }

    /// u(n) = P(n ∈ τ).
    pub fn renewal_mass(&self, n: usize) -> f64 {
        {
            let memo = self.u_memo.read().unwrap();
            if n < memo.len() {
                return memo[n];
            }
        }
        let mut memo = self.u_memo.write().unwrap();
        self.extend_memo(&mut memo, n);
        memo[n]
    }

    /// u(0..=n).
    pub fn renewal_masses(&self, n: usize) -> Vec<f64> {
        {
            let memo = self.u_memo.read().unwrap();
            if n < memo.len() {
                return memo[..=n].to_vec();
            }
        }
        let mut memo = self.u_memo.write().unwrap();
        self.extend_memo(&mut memo, n);
        memo[..=n].to_vec()
    }

    fn extend_memo(&self, memo: &mut Vec<f64>, n: usize) {
        let g = self.masses.len();
        while memo.len() <= n {
            let k = memo.len();
            let mut s = 0.0;
            for m in 1..=k.min(g) {
                s += self.masses[m - 1] * memo[k - m];
            }
            memo.push(s);
        }
    }

    /// κ_n = (1/μ) Σ_{k≥|n|} P(τ1 ≥ k+1), i.e. P(U ≥ |n|) for the size-biased
    /// residual U.
    pub fn kappa(&self, n: i64) -> Result<f64> {
        self.require_finite_mu("kappa")?;
        Ok(self.kappa_unchecked(n.unsigned_abs() as usize))
    }

    pub(crate) fn kappa_unchecked(&self, n: usize) -> f64 {
        self.tail_survival.get(n).copied().unwrap_or(0.0) / self.mu
    }

    /// Stationary weight of the backward-recurrence chain at age `a` and a
    /// fixed sign: P(τ1 ≥ a+1) / (2μ). Summing both signs gives the law of
    /// the age, whose total mass is one.
    pub fn backward_chain_stationary(&self, a: usize) -> Result<f64> {
        self.require_finite_mu("backward_chain_stationary")?;
        Ok(self.survival(a + 1) / (2.0 * self.mu))
    }

    /// Renewal probability at the next step given the current age:
    /// P(τ1 = a+1 | τ1 ≥ a+1).
    pub fn hazard(&self, age: usize) -> f64 {
        let s = self.survival(age + 1);
        if s > 0.0 {
            (self.mass(age + 1) / s).min(1.0)
        } else {
            1.0
        }
    }

    pub fn sample_gap(&self, rng: &mut StreamRng) -> usize {
        let u: f64 = rng.random();
        // first n with cdf(n) > u
        let idx = self.cdf.partition_point(|&c| c <= u);
        (idx + 1).min(self.masses.len())
    }

    pub fn sample_signed_trajectory(&self, n: usize, seed: u64) -> SignedTrajectory {
        self.sample_signed_trajectory_stream(n, seed, 0)
    }

    pub fn sample_signed_trajectory_stream(&self, n: usize, seed: u64, replica: u64) -> SignedTrajectory {
        let mut rng = rng::stream(seed, replica);
        SignedTrajectory::sample(self, n, &mut rng)
    }

    /// Short form: `zeta:1.5`, `zeta:1.5:100000`, `zeta-trunc:0.5:1000000`,
    /// `head:0.95:1.5[:G]`.
    pub fn spec_string(&self) -> String {
        match &self.spec {
            LawSpec::Zeta { alpha, support } => format!("zeta:{alpha}:{support}"),
            LawSpec::ZetaTruncated { alpha, support } => format!("zeta-trunc:{alpha}:{support}"),
            LawSpec::Head { head, alpha, support } => format!("head:{head}:{alpha}:{support}"),
            LawSpec::Custom { alpha, masses } => format!("custom:{alpha}:{}", masses.len()),
        }
    }
}

impl fmt::Display for RenewalLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl FromStr for RenewalLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::domain(MODULE, format!("law `{s}` is missing a parameter")))?
                .parse::<f64>()
                .map_err(|_| Error::domain(MODULE, format!("bad number in law `{s}`")))
        };
        let support = |i: usize| -> Result<usize> {
            match parts.get(i) {
                None => Ok(DEFAULT_SUPPORT),
                Some(g) => g
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.fract() == 0.0 && *v >= 1.0)
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::domain(MODULE, format!("bad support cutoff `{g}` in law `{s}`"))),
            }
        };
        match parts[0] {
            "zeta" if parts.len() <= 3 => Self::from_spec(LawSpec::Zeta {
                alpha: num(1)?,
                support: support(2)?,
            }),
            "zeta-trunc" if parts.len() <= 3 => Self::from_spec(LawSpec::ZetaTruncated {
                alpha: num(1)?,
                support: support(2)?,
            }),
            "head" if parts.len() <= 4 => Self::from_spec(LawSpec::Head {
                head: num(1)?,
                alpha: num(2)?,
                support: support(3)?,
            }),
            "custom" => Err(Error::domain(
                MODULE,
                "custom laws are read from a CSV file (`custom:<alpha>:<path>` on the command line)",
            )),
            _ => Err(Error::domain(
                MODULE,
                format!("unknown law `{s}` (zeta:A[:G], zeta-trunc:A:G, head:P:A[:G], custom:A:path)"),
            )),
        }
    }
}

/// Parses `n,mass` rows (header optional, `#` comments allowed) into a dense
/// mass vector K(1..=max n).
pub fn parse_masses_csv(text: &str) -> Result<Vec<f64>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = (cols.next().unwrap_or(""), cols.next().unwrap_or(""));
        match (a.parse::<usize>(), b.parse::<f64>()) {
            (Ok(n), Ok(m)) if n >= 1 => pairs.push((n, m)),
            _ if i == 0 || pairs.is_empty() && a.parse::<f64>().is_err() => continue,
            _ => return Err(Error::domain(MODULE, format!("bad mass row {}: `{line}`", i + 1))),
        }
    }
    let g = pairs.iter().map(|p| p.0).max().unwrap_or(0);
    if g == 0 {
        return Err(Error::domain(MODULE, "mass CSV has no rows"));
    }
    let mut masses = vec![0.0; g];
    for (n, m) in pairs {
        masses[n - 1] = m;
    }
    Ok(masses)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(MODULE, format!("alpha must be finite and >= 0, got {alpha}")))
    }
}

fn check_support(g: usize) -> Result<()> {
    if g >= 2 {
        Ok(())
    } else {
        Err(Error::domain(MODULE, format!("support cutoff G must be at least 2, got {g}")))
    }
}

fn power_masses(alpha: f64, from: usize, to: usize) -> Vec<f64> {
    (1..=to)
        .map(|n| if n < from { 0.0 } else { (n as f64).powf(-(1.0 + alpha)) })
        .collect()
}

/// Renewal points with the fair excursion signs, on sites 1..=N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedTrajectory {
    pub len: usize,
    /// τ_0 = 0 < τ_1 < ... ≤ N.
    pub renewal_points: Vec<usize>,
    /// X_k for each excursion meeting 1..=N, the last possibly incomplete.
    pub signs: Vec<u8>,
    /// Δ_n at index n-1.
    pub delta: Vec<u8>,
    /// δ_n at index n-1.
    pub contacts: Vec<u8>,
}

impl SignedTrajectory {
    pub fn sample(law: &RenewalLaw, n: usize, rng: &mut StreamRng) -> Self {
        let mut renewal_points = vec![0];
        let mut signs = Vec::new();
        let mut delta = vec![0u8; n];
        let mut contacts = vec![0u8; n];
        let mut pos = 0;
        while pos < n {
            let gap = law.sample_gap(rng);
            let sign = rng.random::<bool>() as u8;
            signs.push(sign);
            let end = pos + gap;
            for d in &mut delta[pos..end.min(n)] {
                *d = sign;
            }
            if end <= n {
                contacts[end - 1] = 1;
                renewal_points.push(end);
            }
            pos = end;
        }
        SignedTrajectory {
            len: n,
            renewal_points,
            signs,
            delta,
            contacts,
        }
    }

    /// Age n − max{τ_k ≤ n} at each site 1..=N.
    pub fn ages(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len);
        let mut last = 0;
        for (i, &c) in self.contacts.iter().enumerate() {
            let site = i + 1;
            if c == 1 {
                last = site;
            }
            out.push(site - last);
        }
        out
    }
}

/// (1/N) Σ_{n,m=1}^N ρ_{|n−m|} x_n y_m for 0/1 sequences of equal length,
/// with `rho` holding ρ_0..=ρ_R and ρ_k = 0 beyond R.
pub fn pair_average(x: &[u8], y: &[u8], rho: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "pair_average needs sequences of equal length");
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let mut s = NeumaierSum::new();
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let lo = i.saturating_sub(rho.len() - 1);
        let hi = (i + rho.len()).min(n);
        let mut row = 0.0;
        for (j, &yj) in y.iter().enumerate().take(hi).skip(lo) {
            if yj != 0 {
                row += rho[i.abs_diff(j)];
            }
        }
        s.add(row);
    }
    s.total() / n as f64
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    #[test]
    fn pair_average_matches_double_loop() {
        let x = [1u8, 0, 1, 1, 0, 1];
        let y = [0u8, 1, 1, 0, 1, 1];
        let rho = [1.0, 0.3, -0.2];
        let mut want = 0.0;
        for i in 0..6usize {
            for j in 0..6 {
                let d = i.abs_diff(j);
                if d < 3 {
                    want += rho[d] * (x[i] * y[j]) as f64;
                }
            }
        }
        assert!((pair_average(&x, &y, &rho) - want / 6.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_law_normalises() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let total: f64 = law.masses().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        let z: f64 = (1..=DEFAULT_SUPPORT).map(|n| (n as f64).powf(-2.5)).sum();
        assert!((law.mass(1) - 1.0 / z).abs() < 1e-14);
        assert_eq!(law.survival(1), 1.0);
        assert_eq!(law.survival(DEFAULT_SUPPORT + 1), 0.0);
    }

    #[test]
    fn mu_approaches_zeta_ratio() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let exact = law.untruncated_mu().unwrap();
        assert!((exact.value - 1.9473).abs() < 1e-4);
        assert!(law.mu_relative_error() < 5e-3);
        let direct: f64 = law.masses().iter().enumerate().map(|(i, m)| (i + 1) as f64 * m).sum();
        assert!((law.mu() - direct).abs() < 1e-12);
    }

    #[test]
    fn heavy_laws_flag_mu() {
        let law = RenewalLaw::build(0.5, LawVariant::Zeta, 1000).unwrap();
        assert!(law.mu_unreliable());
        assert!(law.kappa(0).is_err());
        let t = RenewalLaw::build(0.5, LawVariant::ZetaTruncated, 1000).unwrap();
        assert!(!t.mu_unreliable());
        assert!((t.kappa(0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kappa_edge_values() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        assert!((law.kappa(0).unwrap() - 1.0).abs() < 1e-14);
        assert!((law.kappa(1).unwrap() - (1.0 - 1.0 / law.mu())).abs() < 1e-14);
        assert_eq!(law.kappa(-3).unwrap(), law.kappa(3).unwrap());
    }

    #[test]
    fn renewal_mass_first_values() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        assert_eq!(law.renewal_mass(0), 1.0);
        assert_eq!(law.renewal_mass(1), law.mass(1));
        let u2 = law.mass(2) + law.mass(1) * law.mass(1);
        assert!((law.renewal_mass(2) - u2).abs() < 1e-16);
    }

    #[test]
    fn stationary_weights_sum_to_one() {
        let law = RenewalLaw::build(1.5, LawVariant::Zeta, 2000).unwrap();
        let s: f64 = (0..=2000).map(|a| 2.0 * law.backward_chain_stationary(a).unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((law.backward_chain_stationary(0).unwrap() - 0.5 / law.mu()).abs() < 1e-15);
    }

    #[test]
    fn head_law_has_requested_head() {
        let law = RenewalLaw::with_head(0.95, 1.5, 1000).unwrap();
        assert!((law.mass(1) - 0.95).abs() < 1e-15);
        let total: f64 = law.masses().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn parse_law_strings() {
        let l: RenewalLaw = "zeta:1.5:500".parse().unwrap();
        assert_eq!(l.support(), 500);
        assert_eq!(l.spec_string(), "zeta:1.5:500");
        let h: RenewalLaw = "head:0.9:2".parse().unwrap();
        assert_eq!(h.support(), DEFAULT_SUPPORT);
        assert!("zeta:-1".parse::<RenewalLaw>().is_err());
        assert!("zeta:1.5:1".parse::<RenewalLaw>().is_err());
    }

    #[test]
    fn masses_csv() {
        let m = parse_masses_csv("n,mass\n1,0.5\n3,0.5\n").unwrap();
        assert_eq!(m, vec![0.5, 0.0, 0.5]);
        let law = RenewalLaw::custom(1.0, m).unwrap();
        assert_eq!(law.mu(), 2.0);
    }

    #[test]
    fn trajectory_structure() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let t = law.sample_signed_trajectory(500, 3);
        assert_eq!(t.renewal_points[0], 0);
        for w in t.renewal_points.windows(2) {
            let sign = t.delta[w[1] - 1];
            assert!(t.delta[w[0]..w[1]].iter().all(|&d| d == sign));
            assert_eq!(t.contacts[w[1] - 1], 1);
        }
        let n_contacts: usize = t.contacts.iter().map(|&c| c as usize).sum();
        assert_eq!(n_contacts + 1, t.renewal_points.len());
        assert_eq!(t, law.sample_signed_trajectory(500, 3));
    }
}
