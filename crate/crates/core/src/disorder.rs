//! Stationary Gaussian environments and changes of measure.

use std::io::{Read, Write};
use std::sync::Arc;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::correlation::CorrelationModel;
use crate::rng::{self, StreamRng};
use crate::stats::MeanSe;
use crate::{Error, Result};

const MODULE: &str = "disorder";

/// Largest N for which the dense square-root fallback is attempted.
pub const DENSE_SAMPLER_LIMIT: usize = 1 << 15;

/// Embedding eigenvalues below this are treated as a genuine failure.
const EMBEDDING_CLIP: f64 = -1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiltKind {
    /// Density ∝ exp(δ Σ_{i≤k} ω_i); the mean becomes δ Υ 1_k.
    Exponential,
    /// Mean δ on sites 1..=k, covariance unchanged. This is the measure
    /// whose Radon–Nikodym derivative against P is
    /// exp(δ⟨Υ_k^{-1}1_k, ω⟩ − ½δ²⟨Υ_k^{-1}1_k, 1_k⟩).
    MeanShift,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tilt {
    pub delta: f64,
    pub window: usize,
    pub kind: TiltKind,
}

impl Tilt {
    pub fn exponential(delta: f64, window: usize) -> Self {
        Tilt {
            delta,
            window,
            kind: TiltKind::Exponential,
        }
    }

    pub fn mean_shift(delta: f64, window: usize) -> Self {
        Tilt {
            delta,
            window,
            kind: TiltKind::MeanShift,
        }
    }

    /// Mean of ω_1..ω_N under the tilted law.
    pub fn mean_vector(&self, model: &CorrelationModel, n: usize) -> Vec<f64> {
        let k = self.window.min(n);
        match self.kind {
            TiltKind::MeanShift => (0..n).map(|i| if i < k { self.delta } else { 0.0 }).collect(),
            TiltKind::Exponential => {
                // δ Σ_{j<window} ρ_{i-j}, via prefix sums of ρ over lags 0..
                let w = self.window as i64;
                let reach = (n as i64 + w).max(1) as usize;
                let mut prefix = Vec::with_capacity(reach + 1);
                let mut acc = 0.0;
                for d in 0..=reach {
                    acc += model.rho(d as i64);
                    prefix.push(acc);
                }
                let p = |x: i64| prefix[x as usize];
                // Σ_{d=a}^{b} ρ_d with a ≤ b, using ρ_{-d} = ρ_d
                let lag_sum = |a: i64, b: i64| -> f64 {
                    if a >= 0 {
                        p(b) - if a > 0 { p(a - 1) } else { 0.0 }
                    } else if b < 0 {
                        p(-a) - p(-b - 1)
                    } else {
                        p(-a) - 1.0 + p(b)
                    }
                };
                (0..n as i64)
                    .map(|i| if w == 0 { 0.0 } else { self.delta * lag_sum(i - w + 1, i) })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderPath {
    pub values: Vec<f64>,
    pub model_id: String,
    pub model_hash: u64,
    pub seed: u64,
    pub replica: u64,
    pub tilt: Option<Tilt>,
}

impl DisorderPath {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Debug dump: magic, N, seed, model hash, then little-endian f64 values.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"PLDP")?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&self.model_hash.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dump back as (seed, model hash, values).
    pub fn read_dump<R: Read>(mut r: R) -> Result<(u64, u64, Vec<f64>)> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"PLDP" {
            return Err(Error::domain(MODULE, "not a disorder dump (bad magic)"));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let seed = u64::from_le_bytes(word);
        r.read_exact(&mut word)?;
        let hash = u64::from_le_bytes(word);
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut word)?;
            values.push(f64::from_le_bytes(word));
        }
        Ok((seed, hash, values))
    }
}

/// Stable 64-bit fingerprint of a correlation model.
pub fn model_hash(model: &CorrelationModel) -> u64 {
    let digest = Sha256::digest(model.to_config().as_bytes());
    let mut b = [0u8; 8];
    b.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(b)
}

enum Method {
    Circulant {
        sqrt_eigs: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    Dense {
        lower: DMatrix<f64>,
    },
}

/// Exact sampler for ω_1..ω_N, built once per (model, N).
pub struct GaussianSampler {
    model: CorrelationModel,
    n: usize,
    method: Method,
    model_id: String,
    model_hash: u64,
}

impl GaussianSampler {
    pub fn new(model: &CorrelationModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain(MODULE, "path length N must be at least 1"));
        }
        let method = match circulant(model, n) {
            Some(m) => m,
            None => {
                if n > DENSE_SAMPLER_LIMIT {
                    return Err(Error::capability(
                        MODULE,
                        format!(
                            "circulant embedding is not nonnegative definite and N = {n} exceeds the dense limit {DENSE_SAMPLER_LIMIT}"
                        ),
                    ));
                }
                let chol = model.covariance_matrix(n).cholesky().ok_or_else(|| {
                    Error::capability(MODULE, format!("dense covariance factorisation failed at N = {n}"))
                })?;
                Method::Dense { lower: chol.l() }
            }
        };
        Ok(GaussianSampler {
            model: model.clone(),
            n,
            method,
            model_id: model.to_string(),
            model_hash: model_hash(model),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn model(&self) -> &CorrelationModel {
        &self.model
    }

    pub fn uses_dense_fallback(&self) -> bool {
        matches!(self.method, Method::Dense { .. })
    }

    /// Fills `out` (length N) with a centred sample drawn from `rng`.
    pub fn fill(&self, rng: &mut StreamRng, out: &mut [f64]) {
        assert_eq!(out.len(), self.n);
        match &self.method {
            Method::Circulant { sqrt_eigs, fft } => {
                let mut buf: Vec<Complex<f64>> = sqrt_eigs
                    .iter()
                    .map(|&s| {
                        let re: f64 = StandardNormal.sample(rng);
                        let im: f64 = StandardNormal.sample(rng);
                        Complex::new(s * re, s * im)
                    })
                    .collect();
                fft.process(&mut buf);
                for (o, c) in out.iter_mut().zip(&buf) {
                    *o = c.re;
                }
            }
            Method::Dense { lower } => {
                let z: Vec<f64> = (0..self.n).map(|_| StandardNormal.sample(rng)).collect();
                for (i, o) in out.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for (j, zj) in z.iter().enumerate().take(i + 1) {
                        s += lower[(i, j)] * zj;
                    }
                    *o = s;
                }
            }
        }
    }

    /// Path for `(seed, replica)`, optionally tilted.
    pub fn sample(&self, seed: u64, replica: u64, tilt: Option<Tilt>) -> DisorderPath {
        let mut rng = rng::stream(seed, replica);
        let mut values = vec![0.0; self.n];
        self.fill(&mut rng, &mut values);
        if let Some(t) = tilt {
            for (v, m) in values.iter_mut().zip(t.mean_vector(&self.model, self.n)) {
                *v += m;
            }
        }
        DisorderPath {
            values,
            model_id: self.model_id.clone(),
            model_hash: self.model_hash,
            seed,
            replica,
            tilt,
        }
    }
}

fn circulant(model: &CorrelationModel, n: usize) -> Option<Method> {
    let m = (2 * (n + model.truncation_radius())).max(2).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = (0..m)
        .map(|j| Complex::new(model.rho(j.min(m - j) as i64), 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let mut sqrt_eigs = Vec::with_capacity(m);
    for c in &buf {
        if c.re < EMBEDDING_CLIP {
            return None;
        }
        sqrt_eigs.push((c.re.max(0.0) / m as f64).sqrt());
    }
    Some(Method::Circulant {
        sqrt_eigs,
        fft: planner.plan_fft_forward(m),
    })
}

/// One path of length N for `seed` (replica 0).
pub fn sample_path(model: &CorrelationModel, n: usize, seed: u64, tilt: Option<Tilt>) -> Result<DisorderPath> {
    Ok(GaussianSampler::new(model, n)?.sample(seed, 0, tilt))
}

/// H(P̃_L | P) = a²/2 ⟨Υ_L^{-1} 1_L, 1_L⟩ for a mean shift of a on 1..=L.
pub fn relative_entropy_shift(model: &CorrelationModel, a: f64, l: usize) -> Result<f64> {
    let q = model.toeplitz_solve_ones(l)?.quad_form;
    Ok(0.5 * a * a * q)
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(MODULE, format!("Hölder exponent zeta must lie in (0,1), got {zeta}")))
    }
}

/// Ẽ[(dP/dP̃)^{1/(1-ζ)}]^{1-ζ} = exp(½ ζδ²/(1-ζ) ⟨Υ_k^{-1}1_k, 1_k⟩) for the
/// mean shift of δ on 1..=k.
pub fn rn_cost(model: &CorrelationModel, delta: f64, zeta: f64, k: usize) -> Result<f64> {
    check_zeta(zeta)?;
    if delta == 0.0 {
        return Ok(1.0);
    }
    let q = model.toeplitz_solve_ones(k)?.quad_form;
    Ok((0.5 * zeta * delta * delta / (1.0 - zeta) * q).exp())
}

/// Monte Carlo value of the same quantity from `replicas` tilted paths.
/// Returns the estimate and its delta-method standard error.
pub fn rn_cost_mc(
    model: &CorrelationModel,
    delta: f64,
    zeta: f64,
    k: usize,
    replicas: usize,
    seed: u64,
) -> Result<MeanSe> {
    check_zeta(zeta)?;
    let solve = model.toeplitz_solve_ones(k)?;
    let sampler = GaussianSampler::new(model, k)?;
    let p = 1.0 / (1.0 - zeta);
    let tilt = Some(Tilt::mean_shift(delta, k));
    let x = &solve.solution;
    let q = solve.quad_form;
    let samples: Vec<f64> = crate::parallel::map_indexed(replicas, |r| {
        let path = sampler.sample(seed, r as u64, tilt);
        let dot: f64 = path.values.iter().zip(x).map(|(w, xi)| w * xi).sum();
        // log dP/dP̃ at this path, raised to the power 1/(1-ζ)
        (p * (-delta * dot + 0.5 * delta * delta * q)).exp()
    });
    let m = MeanSe::from_samples(&samples);
    let value = m.mean.powf(1.0 - zeta);
    let stderr = (1.0 - zeta) * m.mean.powf(-zeta) * m.stderr;
    Ok(MeanSe {
        mean: value,
        stderr,
        samples: replicas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_deterministic() {
        let m = CorrelationModel::finite_range(vec![1.0, 0.25]).unwrap();
        let a = sample_path(&m, 100, 5, None).unwrap();
        let b = sample_path(&m, 100, 5, None).unwrap();
        assert_eq!(a, b);
        let c = sample_path(&m, 100, 6, None).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn exponential_tilt_bulk_mean() {
        let m = CorrelationModel::finite_range(vec![1.0, 0.25]).unwrap();
        let t = Tilt::exponential(0.2, 50);
        let mean = t.mean_vector(&m, 50);
        assert!((mean[25] - 0.3).abs() < 1e-15);
        assert!((mean[0] - 0.25).abs() < 1e-15);
        // dense oracle: δ Υ 1_k
        let dense = m.covariance_matrix(50) * nalgebra::DVector::from_element(50, 0.2);
        for (a, b) in mean.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn entropy_and_cost_closed_forms() {
        let iid = CorrelationModel::iid();
        assert!((relative_entropy_shift(&iid, 0.7, 10).unwrap() - 0.49 * 5.0).abs() < 1e-14);
        let fr = CorrelationModel::finite_range(vec![1.0, 0.25]).unwrap();
        assert!((relative_entropy_shift(&fr, 1.0, 2).unwrap() - 0.8).abs() < 1e-14);
        assert_eq!(rn_cost(&fr, 0.0, 0.5, 8).unwrap(), 1.0);
        let v = rn_cost(&iid, 0.3, 0.4, 8).unwrap();
        assert!((v - (0.4f64 * 0.09 * 8.0 / (2.0 * 0.6)).exp()).abs() < 1e-14);
        assert!(rn_cost(&iid, 0.3, 1.0, 8).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let m = CorrelationModel::iid();
        let p = sample_path(&m, 16, 9, None).unwrap();
        let mut buf = Vec::new();
        p.write_dump(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 24 + 16 * 8);
        let (seed, hash, values) = DisorderPath::read_dump(&buf[..]).unwrap();
        assert_eq!((seed, hash), (9, model_hash(&m)));
        assert_eq!(values, p.values);
    }
}
