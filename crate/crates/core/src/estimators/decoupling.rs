//! Gaussian decoupling: E[f(ω_I) g(ω_J)] ≤ e^{c² C(I,J)} E[f(ω_I)] E[g(ω_J)]
//! with C(I,J) = Σ_{i∈I, j∈J} |ρ_ij| and c = 2λ, for f and g taken from the
//! block partition functions E[exp(−2λ Σ_{n∈I}(ω_n + h)σ_n)].

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::disorder::GaussianSampler;
use crate::numeric::log_half_one_plus_exp;
use crate::parallel::map_indexed;
use crate::partition::{quenched_copolymer_logz, site_weight_pinning_logz, Boundary, CopolymerParams};
use crate::renewal::RenewalLaw;
use crate::stats::MeanSe;
use crate::{Error, Result};

use super::MODULE;

/// Sites `start..start + len` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn new(start: usize, len: usize) -> Self {
        Block { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    fn sites(&self) -> Vec<i64> {
        (self.start..self.end()).map(|s| s as i64).collect()
    }

    fn overlaps(&self, other: &Block) -> bool {
        self.start < other.end() && other.start < self.end()
    }
}

/// σ in E[exp(−2λ Σ(ω_n + h)σ_n)].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functional {
    /// σ = Δ: the constrained copolymer partition function of the block.
    Copolymer,
    /// σ = δ: a constrained pinning partition function.
    Pinning,
    /// σ ≡ 0 or σ ≡ 1 with probability ½ each: one long excursion.
    Stretch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecouplingCheck {
    pub left: Block,
    pub right: Block,
    pub f: Functional,
    pub g: Functional,
    pub lambda: f64,
    pub h: f64,
    /// Σ_{i∈I, j∈J} |ρ_ij|
    pub cross: f64,
    pub factor: f64,
    /// E[fg], E[f]E[g]e^{c²C}, both scaled by exp(−max log f − max log g).
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs in the same scale.
    pub margin: f64,
    pub margin_stderr: f64,
    pub replicas: usize,
}

impl DecouplingCheck {
    /// Margin in units of its standard error.
    pub fn margin_in_se(&self) -> f64 {
        if self.margin_stderr == 0.0 {
            if self.margin >= 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            self.margin / self.margin_stderr
        }
    }
}

fn log_functional(kind: Functional, omega: &[f64], law: &RenewalLaw, lambda: f64, h: f64) -> Result<f64> {
    match kind {
        Functional::Copolymer => {
            quenched_copolymer_logz(omega, law, &CopolymerParams::new(lambda, h, Boundary::Constrained)?)
        }
        Functional::Pinning => {
            let site: Vec<f64> = omega.iter().map(|w| -2.0 * lambda * (w + h)).collect();
            site_weight_pinning_logz(&site, law, Boundary::Constrained)
        }
        Functional::Stretch => {
            let s: f64 = omega.iter().map(|w| w + h).sum();
            Ok(log_half_one_plus_exp(-2.0 * lambda * s))
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn decoupling_check(
    model: &CorrelationModel,
    law: &RenewalLaw,
    left: Block,
    right: Block,
    f: Functional,
    g: Functional,
    lambda: f64,
    h: f64,
    replicas: usize,
    seed: u64,
) -> Result<DecouplingCheck> {
    if left.len == 0 || right.len == 0 || left.start == 0 || right.start == 0 {
        return Err(Error::domain(MODULE, "decoupling blocks must be nonempty and start at site >= 1"));
    }
    if left.overlaps(&right) {
        return Err(Error::domain(
            MODULE,
            format!("decoupling blocks overlap: {left:?} and {right:?}"),
        ));
    }
    if replicas < 2 {
        return Err(Error::domain(MODULE, "decoupling_check needs at least 2 replicas"));
    }
    let cross = model.cross_abs_sum(&left.sites(), &right.sites());
    let c = 2.0 * lambda;
    let factor = (c * c * cross).exp();
    let n = left.end().max(right.end()) - 1;
    let sampler = GaussianSampler::new(model, n)?;
    let pairs: Vec<Result<(f64, f64)>> = map_indexed(replicas, |r| {
        let path = sampler.sample(seed, r as u64, None);
        let w = &path.values;
        let lf = log_functional(f, &w[left.start - 1..left.end() - 1], law, lambda, h)?;
        let lg = log_functional(g, &w[right.start - 1..right.end() - 1], law, lambda, h)?;
        Ok((lf, lg))
    });
    let pairs: Vec<(f64, f64)> = pairs.into_iter().collect::<Result<_>>()?;
    let mf = pairs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mg = pairs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let fs: Vec<f64> = pairs.iter().map(|p| (p.0 - mf).exp()).collect();
    let gs: Vec<f64> = pairs.iter().map(|p| (p.1 - mg).exp()).collect();
    let fg: Vec<f64> = fs.iter().zip(&gs).map(|(a, b)| a * b).collect();
    let ef = MeanSe::from_samples(&fs).mean;
    let eg = MeanSe::from_samples(&gs).mean;
    let efg = MeanSe::from_samples(&fg).mean;
    let rhs = factor * ef * eg;
    // first-order expansion of rhs − lhs around the sample means
    let lin: Vec<f64> = (0..replicas)
        .map(|i| factor * (eg * fs[i] + ef * gs[i]) - fg[i])
        .collect();
    let se = MeanSe::from_samples(&lin).stderr;
    Ok(DecouplingCheck {
        left,
        right,
        f,
        g,
        lambda,
        h,
        cross,
        factor,
        lhs: efg,
        rhs,
        margin: rhs - efg,
        margin_stderr: se,
        replicas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_is_rejected() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::iid();
        let r = decoupling_check(&m, &law, Block::new(1, 10), Block::new(5, 10), Functional::Stretch, Functional::Stretch, 0.3, 0.0, 10, 1);
        assert!(matches!(r, Err(Error::Domain { .. })));
    }

    #[test]
    fn separated_blocks_have_no_cross_mass() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.25]).unwrap();
        let r = decoupling_check(&m, &law, Block::new(1, 8), Block::new(11, 8), Functional::Copolymer, Functional::Pinning, 0.4, 0.1, 200, 2).unwrap();
        assert_eq!(r.cross, 0.0);
        assert_eq!(r.factor, 1.0);
        let adj = decoupling_check(&m, &law, Block::new(1, 8), Block::new(9, 8), Functional::Stretch, Functional::Stretch, 0.4, 0.1, 200, 2).unwrap();
        assert!((adj.cross - 0.25).abs() < 1e-15);
    }
}
