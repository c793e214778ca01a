//! Two-replica lower bound on the quenched pinning free energy at size N:
//!
//! F_N ≥ F_{a,N} − (e^{1/M}/M)(1/2N) log A_N + (e^{1/M}/M)(1/2N) log B_N,
//!
//! where A_N couples two independent free renewals through (M+1)β²Σρ δδ' and
//! B_N is the square of the constrained annealed partition function.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::parallel::map_indexed;
use crate::partition::{
    enumerate_oracle, enumerate_pair_oracle, AnnealedTransferSpec, Boundary, OracleKind, ENUMERATION_LIMIT,
    PAIR_ENUMERATION_LIMIT,
};
use crate::renewal::{RenewalLaw, SignedTrajectory};
use crate::rng;
use crate::stats::{LogMean, MeanSe};
use crate::{Error, Result};

use super::{quenched_logz_samples, Polymer, MODULE};

/// Largest N accepted; the quenched side needs `replicas` O(N²) solves and
/// the pair chain O(N³) work.
pub const MAX_INTERPOLATION_SIZE: usize = 512;
const PAIR_SAMPLES_PER_REPLICA: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoReplicaQuantities {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub h: f64,
    pub log_a: f64,
    /// Standard error of log A_N (zero when exact).
    pub log_a_stderr: f64,
    pub log_b: f64,
    pub log_b_stderr: f64,
    pub exact_a: bool,
    pub exact_b: bool,
    /// E[(1/N) log Z_N] over the replicas, constrained endpoint.
    pub quenched: f64,
    pub quenched_stderr: f64,
    /// (1/N) log E Z_N, constrained endpoint.
    pub annealed: f64,
    /// Right-hand side of the bound.
    pub rhs: f64,
    /// quenched − rhs
    pub margin: f64,
    pub margin_stderr: f64,
    pub replicas: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn two_replica_quantities(
    model: &CorrelationModel,
    law: &RenewalLaw,
    beta: f64,
    h: f64,
    n: usize,
    m: usize,
    replicas: usize,
    seed: u64,
) -> Result<TwoReplicaQuantities> {
    if n == 0 || n > MAX_INTERPOLATION_SIZE {
        return Err(Error::domain(
            MODULE,
            format!("two_replica_quantities needs 1 <= N <= {MAX_INTERPOLATION_SIZE}, got {n}"),
        ));
    }
    if m == 0 || replicas < 2 {
        return Err(Error::domain(MODULE, "two_replica_quantities needs M >= 1 and at least 2 replicas"));
    }
    let kappa = (m + 1) as f64;
    let spec = AnnealedTransferSpec::new(model, law).ok();
    let (log_a, log_a_stderr, exact_a) = match &spec {
        Some(s) => (s.pinning_pair(beta, h, kappa, n)?[n - 1], 0.0, true),
        None if n <= PAIR_ENUMERATION_LIMIT => (enumerate_pair_oracle(model, law, beta, h, kappa, n)?, 0.0, true),
        None => {
            let lm = pair_mc(model, law, beta, h, kappa, n, replicas * PAIR_SAMPLES_PER_REPLICA, rng::derive(seed, "pair"));
            (lm.log_mean, lm.rel_stderr, false)
        }
    };
    let (log_za, za_stderr, exact_b) = match &spec {
        Some(s) => (s.pinning(beta, h, n)?.last_constrained(), 0.0, true),
        None if n <= ENUMERATION_LIMIT => {
            let kind = OracleKind::AnnealedPinning { model, beta, h };
            (enumerate_oracle(&kind, law, n, Boundary::Constrained)?, 0.0, true)
        }
        None => {
            let lm = single_constrained_mc(model, law, beta, h, n, replicas * PAIR_SAMPLES_PER_REPLICA, rng::derive(seed, "single"));
            (lm.log_mean, lm.rel_stderr, false)
        }
    };
    let logs = quenched_logz_samples(model, law, Polymer::Pinning, beta, &[h], Boundary::Constrained, n, replicas, seed)?;
    let nf = n as f64;
    let q = MeanSe::from_samples(&logs[0].iter().map(|l| l / nf).collect::<Vec<_>>());
    let coeff = (1.0 / m as f64).exp() / m as f64 / (2.0 * nf);
    let log_b = 2.0 * log_za;
    let log_b_stderr = 2.0 * za_stderr;
    let annealed = log_za / nf;
    let rhs = annealed - coeff * log_a + coeff * log_b;
    let margin = q.mean - rhs;
    let margin_stderr = (q.stderr.powi(2)
        + (coeff * log_a_stderr).powi(2)
        + ((coeff * 2.0 + 1.0 / nf) * za_stderr).powi(2))
    .sqrt();
    Ok(TwoReplicaQuantities {
        n,
        m,
        beta,
        h,
        log_a,
        log_a_stderr,
        log_b,
        log_b_stderr,
        exact_a,
        exact_b,
        quenched: q.mean,
        quenched_stderr: q.stderr,
        annealed,
        rhs,
        margin,
        margin_stderr,
        replicas,
    })
}

/// Σ_{n,m} ρ_{nm} x_n y_m over contact lists, with ρ truncated at the
/// model's radius.
fn pair_sum(rho: &[f64], x: &[usize], y: &[usize]) -> f64 {
    let r = rho.len() - 1;
    let mut s = 0.0;
    let mut start = 0;
    for &a in x {
        while start < y.len() && y[start] + r < a {
            start += 1;
        }
        for &b in &y[start..] {
            if b > a + r {
                break;
            }
            s += rho[a.abs_diff(b)];
        }
    }
    s
}

fn contact_sites(t: &SignedTrajectory) -> Vec<usize> {
    t.contacts.iter().enumerate().filter(|(_, &c)| c == 1).map(|(i, _)| i + 1).collect()
}

#[allow(clippy::too_many_arguments)]
fn pair_mc(
    model: &CorrelationModel,
    law: &RenewalLaw,
    beta: f64,
    h: f64,
    kappa: f64,
    n: usize,
    samples: usize,
    seed: u64,
) -> LogMean {
    let rho = model.rho_seq(model.truncation_radius().min(n) + 1);
    let b2 = beta * beta;
    let logs = map_indexed(samples, |i| {
        let mut g = rng::stream(seed, i as u64);
        let a = contact_sites(&SignedTrajectory::sample(law, n, &mut g));
        let b = contact_sites(&SignedTrajectory::sample(law, n, &mut g));
        let own = |x: &[usize]| h * x.len() as f64 + 0.5 * b2 * pair_sum(&rho, x, x);
        own(&a) + own(&b) + kappa * b2 * pair_sum(&rho, &a, &b)
    });
    LogMean::from_logs(&logs)
}

fn single_constrained_mc(
    model: &CorrelationModel,
    law: &RenewalLaw,
    beta: f64,
    h: f64,
    n: usize,
    samples: usize,
    seed: u64,
) -> LogMean {
    let rho = model.rho_seq(model.truncation_radius().min(n) + 1);
    let b2 = beta * beta;
    let logs = map_indexed(samples, |i| {
        let mut g = rng::stream(seed, i as u64);
        let t = SignedTrajectory::sample(law, n, &mut g);
        if t.contacts[n - 1] == 0 {
            return f64::NEG_INFINITY;
        }
        let a = contact_sites(&t);
        h * a.len() as f64 + 0.5 * b2 * pair_sum(&rho, &a, &a)
    });
    LogMean::from_logs(&logs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_sum_matches_double_loop() {
        let rho = vec![1.0, 0.3, -0.1];
        let x: Vec<usize> = vec![1, 2, 5, 9];
        let y = vec![2, 3, 7, 9, 10];
        let mut want = 0.0;
        for &a in &x {
            for &b in &y {
                let d: usize = a.abs_diff(b);
                if d < rho.len() {
                    want += rho[d];
                }
            }
        }
        assert!((pair_sum(&rho, &x, &y) - want).abs() < 1e-15);
    }

    #[test]
    fn exact_routes_agree_for_small_n() {
        let law = RenewalLaw::zeta(1.5).unwrap();
        let m = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        let q = two_replica_quantities(&m, &law, 0.3, -0.1, 10, 5, 8, 1).unwrap();
        let want = enumerate_pair_oracle(&m, &law, 0.3, -0.1, 6.0, 10).unwrap();
        assert!(q.exact_a && (q.log_a - want).abs() < 1e-12);
    }
}
