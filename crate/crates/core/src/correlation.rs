//! Two-point functions of the stationary Gaussian environment.
//!
//! A [`CorrelationModel`] is validated on construction: ρ_0 = 1, the
//! correlations are absolutely summable with an analytic tail bound, and the
//! truncated spectral symbol f(λ) = 1 + 2 Σ_{k≥1} ρ_k cos(λk) is bounded
//! below by [`SZEGO_FLOOR`]. The last condition keeps every finite section
//! Υ_k uniformly well conditioned. The tail beyond the truncation radius is
//! carried as an uncertainty band on the symbol.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::numeric::{power_tail, Bounded};
use crate::{Error, Result};

const MODULE: &str = "correlation";

/// Models whose certified symbol minimum falls below this are rejected.
pub const SZEGO_FLOOR: f64 = 1e-6;

/// Truncation radii for infinite-range models never exceed this.
pub const MAX_TRUNCATION_RADIUS: usize = 1 << 16;

/// Largest section solved by the dense fallback.
const DENSE_SOLVE_LIMIT: usize = 2048;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorrelationKind {
    Iid,
    /// ρ_0..ρ_R listed explicitly, zero beyond.
    FiniteRange { rho: Vec<f64> },
    /// ρ_k = (1 + k)^{-decay}, decay > 1.
    Polynomial { decay: f64 },
    /// ρ_k = e^{-rate k}.
    Exponential { rate: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationModel {
    kind: CorrelationKind,
    truncation_radius: usize,
    szego: SymbolMin,
}

/// Minimum of the truncated spectral symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolMin {
    /// min over [0, 2π] of 1 + 2 Σ_{k=1}^{R} ρ_k cos(λk)
    pub min: f64,
    pub argmin: f64,
    /// Σ_{|n|>R} |ρ_n|; the untruncated symbol lies within this band.
    pub tail_band: f64,
}

impl SymbolMin {
    /// Certified lower bound on the untruncated symbol.
    pub fn certified(&self) -> f64 {
        self.min - self.tail_band
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzSolveResult {
    pub k: usize,
    /// Solution of Υ_k x = 1_k.
    pub solution: Vec<f64>,
    /// ⟨Υ_k^{-1} 1_k, 1_k⟩
    pub quad_form: f64,
    pub residual: f64,
    pub dense_fallback: bool,
}

impl CorrelationModel {
    pub fn iid() -> Self {
        Self::build(CorrelationKind::Iid, None).expect("iid model is always valid")
    }

    pub fn finite_range(rho: Vec<f64>) -> Result<Self> {
        Self::build(CorrelationKind::FiniteRange { rho }, None)
    }

    pub fn polynomial(decay: f64) -> Result<Self> {
        Self::build(CorrelationKind::Polynomial { decay }, None)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::build(CorrelationKind::Exponential { rate }, None)
    }

    /// Builds a model with an explicit truncation radius (ignored for
    /// finite-range and iid models, whose radius is structural).
    pub fn with_radius(kind: CorrelationKind, radius: usize) -> Result<Self> {
        Self::build(kind, Some(radius))
    }

    fn build(kind: CorrelationKind, radius: Option<usize>) -> Result<Self> {
        let mut kind = kind;
        match &mut kind {
            CorrelationKind::Iid => {}
            CorrelationKind::FiniteRange { rho } => {
                if rho.is_empty() || rho[0] != 1.0 {
                    return Err(Error::domain(MODULE, "finite-range model needs rho_0 = 1 exactly"));
                }
                if rho.iter().any(|r| !r.is_finite()) {
                    return Err(Error::domain(MODULE, "finite-range correlations must be finite"));
                }
                while rho.len() > 1 && *rho.last().unwrap() == 0.0 {
                    rho.pop();
                }
            }
            CorrelationKind::Polynomial { decay } => {
                if !(decay.is_finite() && *decay > 1.0) {
                    return Err(Error::domain(
                        MODULE,
                        format!("polynomial decay must exceed 1 for summability, got {decay}"),
                    ));
                }
            }
            CorrelationKind::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return Err(Error::domain(MODULE, format!("exponential rate must be positive, got {rate}")));
                }
            }
        }
        let truncation_radius = match &kind {
            CorrelationKind::Iid => 0,
            CorrelationKind::FiniteRange { rho } => rho.len() - 1,
            _ => radius
                .unwrap_or_else(|| default_radius(&kind))
                .clamp(1, MAX_TRUNCATION_RADIUS),
        };
        let mut model = CorrelationModel {
            kind,
            truncation_radius,
            szego: SymbolMin {
                min: f64::NAN,
                argmin: 0.0,
                tail_band: 0.0,
            },
        };
        model.szego = model.szego_symbol_min(1024)?;
        if !(model.szego.min >= SZEGO_FLOOR) {
            return Err(Error::domain(
                MODULE,
                format!(
                    "spectral symbol minimum {:.3e} (tail band {:.1e}) is below {SZEGO_FLOOR:e}; Toeplitz operator not invertible",
                    model.szego.min, model.szego.tail_band
                ),
            ));
        }
        Ok(model)
    }

    pub fn kind(&self) -> &CorrelationKind {
        &self.kind
    }

    pub fn truncation_radius(&self) -> usize {
        self.truncation_radius
    }

    /// Cached symbol minimum computed at construction.
    pub fn symbol_min(&self) -> SymbolMin {
        self.szego
    }

    /// Range beyond which ρ vanishes identically, if any.
    pub fn finite_range_radius(&self) -> Option<usize> {
        match &self.kind {
            CorrelationKind::Iid => Some(0),
            CorrelationKind::FiniteRange { rho } => Some(rho.len() - 1),
            _ => None,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match &self.kind {
            CorrelationKind::FiniteRange { rho } => rho.iter().all(|&r| r >= 0.0),
            _ => true,
        }
    }

    /// ρ_n, symmetric in n.
    pub fn rho(&self, n: i64) -> f64 {
        let k = n.unsigned_abs();
        match &self.kind {
            CorrelationKind::Iid => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            CorrelationKind::FiniteRange { rho } => rho.get(k as usize).copied().unwrap_or(0.0),
            CorrelationKind::Polynomial { decay } => (1.0 + k as f64).powf(-decay),
            CorrelationKind::Exponential { rate } => (-rate * k as f64).exp(),
        }
    }

    /// ρ_0..ρ_{len-1}.
    pub fn rho_seq(&self, len: usize) -> Vec<f64> {
        (0..len).map(|k| self.rho(k as i64)).collect()
    }

    /// T(R) ≥ Σ_{|n|>R} |ρ_n|, computed analytically.
    pub fn tail_bound(&self, radius: usize) -> f64 {
        match &self.kind {
            CorrelationKind::Iid => 0.0,
            CorrelationKind::FiniteRange { rho } => 2.0 * rho.iter().skip(radius + 1).map(|r| r.abs()).sum::<f64>(),
            CorrelationKind::Polynomial { decay } => {
                // Σ_{k>R} (1+k)^{-a} ≤ ∫_R^∞ (1+x)^{-a} dx
                2.0 * (1.0 + radius as f64).powf(1.0 - decay) / (decay - 1.0)
            }
            CorrelationKind::Exponential { rate } => {
                let q = (-rate).exp();
                2.0 * q.powf(radius as f64 + 1.0) / (1.0 - q)
            }
        }
    }

    /// Σ_{|n|>R} ρ_n with an error bound (exact series where available).
    pub fn tail_sum(&self, radius: usize) -> Bounded {
        match &self.kind {
            CorrelationKind::Iid => Bounded::exact(0.0),
            CorrelationKind::FiniteRange { rho } => Bounded::exact(2.0 * rho.iter().skip(radius + 1).sum::<f64>()),
            CorrelationKind::Polynomial { decay } => power_tail(*decay, radius as u64 + 2) * 2.0,
            CorrelationKind::Exponential { rate } => {
                let q = (-rate).exp();
                let v = 2.0 * q.powf(radius as f64 + 1.0) / (1.0 - q);
                Bounded::new(v, 4.0 * f64::EPSILON * v)
            }
        }
    }

    /// Σ_{|n|≤R} |ρ_n| + T(R).
    pub fn abs_sum_bound(&self, radius: usize) -> f64 {
        1.0 + 2.0 * (1..=radius).map(|k| self.rho(k as i64).abs()).sum::<f64>() + self.tail_bound(radius)
    }

    /// Υ∞ = Σ_{n∈ℤ} ρ_n.
    pub fn upsilon_infinity(&self) -> f64 {
        self.upsilon_bounded().value
    }

    pub fn upsilon_bounded(&self) -> Bounded {
        match &self.kind {
            CorrelationKind::Iid => Bounded::exact(1.0),
            CorrelationKind::FiniteRange { rho } => {
                Bounded::new(1.0 + 2.0 * rho[1..].iter().sum::<f64>(), 1e-15 * rho.len() as f64)
            }
            CorrelationKind::Polynomial { decay } => {
                // 1 + 2 Σ_{k≥1} (1+k)^{-a} = 2 ζ(a) - 1
                power_tail(*decay, 2) * 2.0 + Bounded::exact(1.0)
            }
            CorrelationKind::Exponential { rate } => {
                let q = (-rate).exp();
                let v = 1.0 + 2.0 * q / (1.0 - q);
                Bounded::new(v, 4.0 * f64::EPSILON * v)
            }
        }
    }

    /// Truncated symbol at a single frequency.
    pub fn symbol(&self, lambda: f64) -> f64 {
        let mut s = 0.0;
        for k in (1..=self.truncation_radius).rev() {
            s += self.rho(k as i64) * (lambda * k as f64).cos();
        }
        1.0 + 2.0 * s
    }

    fn symbol_lipschitz(&self) -> f64 {
        2.0 * (1..=self.truncation_radius)
            .map(|k| k as f64 * self.rho(k as i64).abs())
            .sum::<f64>()
    }

    /// Minimum of the truncated symbol over [0, 2π].
    ///
    /// The symbol is tabulated by FFT on a uniform grid, then each grid
    /// minimum is refined by golden-section search on its neighbouring cell.
    /// The Lipschitz constant bounds how far below the grid minimum the true
    /// minimum can sit; refinement closes that gap.
    pub fn szego_symbol_min(&self, grid_points: usize) -> Result<SymbolMin> {
        if grid_points < 1024 {
            return Err(Error::domain(MODULE, "szego_symbol_min needs at least 1024 grid points"));
        }
        let r = self.truncation_radius;
        let tail_band = self.tail_bound(r);
        if r == 0 {
            return Ok(SymbolMin {
                min: 1.0,
                argmin: 0.0,
                tail_band,
            });
        }
        let p = grid_points.max(2 * r + 2).next_power_of_two();
        let mut buf = vec![Complex::new(0.0, 0.0); p];
        buf[0].re = 1.0;
        for k in 1..=r {
            let v = self.rho(k as i64);
            buf[k].re = v;
            buf[p - k].re = v;
        }
        FftPlanner::<f64>::new().plan_fft_forward(p).process(&mut buf);
        let h = 2.0 * std::f64::consts::PI / p as f64;
        // symmetric in λ ↔ 2π - λ, so [0, π] suffices
        let half = p / 2;
        let vals: Vec<f64> = buf[..=half].iter().map(|c| c.re).collect();
        let mut candidates: Vec<usize> = (0..=half)
            .filter(|&j| {
                let left = if j == 0 { vals[1] } else { vals[j - 1] };
                let right = if j == half { vals[half - 1] } else { vals[j + 1] };
                vals[j] <= left && vals[j] <= right
            })
            .collect();
        candidates.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        candidates.truncate(8);
        let grid_min = candidates.first().map(|&j| vals[j]).unwrap_or(vals[0]);
        let lip = self.symbol_lipschitz();
        let mut best = (grid_min, candidates.first().copied().unwrap_or(0) as f64 * h);
        for &j in &candidates {
            // only cells that could hide something below the current best
            if vals[j] - lip * h > best.0 + 1e-15 || j == candidates[0] {
                let c = j as f64 * h;
                let (x, fx) = golden_min(|x| self.symbol(x), (c - h).max(0.0), (c + h).min(std::f64::consts::PI));
                if fx < best.0 {
                    best = (fx, x);
                }
            }
        }
        Ok(SymbolMin {
            min: best.0,
            argmin: best.1,
            tail_band,
        })
    }

    /// Dense Υ_k.
    pub fn covariance_matrix(&self, k: usize) -> DMatrix<f64> {
        let rho = self.rho_seq(k);
        DMatrix::from_fn(k, k, |i, j| rho[i.abs_diff(j)])
    }

    /// Solves Υ_k x = b by Levinson recursion, falling back to a dense
    /// Cholesky factorisation when the residual exceeds 1e-9·k.
    pub fn toeplitz_solve(&self, rhs: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
        let k = rhs.len();
        if k == 0 {
            return Err(Error::domain(MODULE, "Toeplitz solve needs k >= 1"));
        }
        let rho = self.rho_seq(k + 1);
        let tol = 1e-9 * k as f64;
        let x = levinson(&rho, rhs);
        let residual = toeplitz_residual(&rho, &x, rhs);
        if residual.is_finite() && residual <= tol {
            return Ok((x, residual, false));
        }
        if k > DENSE_SOLVE_LIMIT {
            return Err(Error::NumericalFailure { k, residual });
        }
        let chol = self
            .covariance_matrix(k)
            .cholesky()
            .ok_or(Error::NumericalFailure { k, residual })?;
        let x: Vec<f64> = chol.solve(&DVector::from_column_slice(rhs)).iter().copied().collect();
        let residual = toeplitz_residual(&rho, &x, rhs);
        if residual <= tol {
            Ok((x, residual, true))
        } else {
            Err(Error::NumericalFailure { k, residual })
        }
    }

    /// Υ_k x = 1_k and ⟨Υ_k^{-1} 1_k, 1_k⟩.
    pub fn toeplitz_solve_ones(&self, k: usize) -> Result<ToeplitzSolveResult> {
        let (solution, residual, dense_fallback) = self.toeplitz_solve(&vec![1.0; k])?;
        let quad_form = solution.iter().sum();
        Ok(ToeplitzSolveResult {
            k,
            solution,
            quad_form,
            residual,
            dense_fallback,
        })
    }

    /// Σ_{i∈I, j∈J} |ρ_{ij}| for index sets given as sorted lists.
    pub fn cross_abs_sum(&self, left: &[i64], right: &[i64]) -> f64 {
        let mut s = 0.0;
        for &i in left {
            for &j in right {
                s += self.rho(i - j).abs();
            }
        }
        s
    }

    /// Flat key-value block: `kind`, `params`, `truncation_radius`.
    pub fn to_config(&self) -> String {
        let (kind, params) = match &self.kind {
            CorrelationKind::Iid => ("iid", String::new()),
            CorrelationKind::FiniteRange { rho } => (
                "finite-range",
                rho.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join(","),
            ),
            CorrelationKind::Polynomial { decay } => ("polynomial", format!("{decay:?}")),
            CorrelationKind::Exponential { rate } => ("exponential", format!("{rate:?}")),
        };
        format!("kind = {kind}\nparams = {params}\ntruncation_radius = {}\n", self.truncation_radius)
    }

    pub fn from_config(text: &str) -> Result<Self> {
        let map = crate::config::parse_flat(text)?;
        let kind = map
            .get("kind")
            .ok_or_else(|| Error::domain(MODULE, "config block lacks `kind`"))?;
        let params = map.get("params").map(String::as_str).unwrap_or("");
        let radius = map
            .get("truncation_radius")
            .map(|r| {
                r.parse::<usize>()
                    .map_err(|_| Error::domain(MODULE, format!("bad truncation_radius `{r}`")))
            })
            .transpose()?;
        let kind = parse_kind(kind, params)?;
        Self::build(kind, radius)
    }
}

fn default_radius(kind: &CorrelationKind) -> usize {
    match kind {
        CorrelationKind::Polynomial { decay } => {
            // tail ≤ 1e-3, capped
            let r = (2.0 / (1e-3 * (decay - 1.0))).powf(1.0 / (decay - 1.0));
            if r.is_finite() {
                (r.ceil() as usize).clamp(64, 4096)
            } else {
                4096
            }
        }
        CorrelationKind::Exponential { rate } => ((40.0 / rate).ceil() as usize).clamp(1, 4096),
        _ => 0,
    }
}

fn parse_kind(kind: &str, params: &str) -> Result<CorrelationKind> {
    let nums = || -> Result<Vec<f64>> {
        params
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::domain(MODULE, format!("bad number `{s}` in model parameters")))
            })
            .collect()
    };
    let single = |name: &str| -> Result<f64> {
        let v = nums()?;
        if v.len() != 1 {
            return Err(Error::domain(MODULE, format!("{name} model takes exactly one parameter")));
        }
        Ok(v[0])
    };
    Ok(match kind.trim() {
        "iid" => CorrelationKind::Iid,
        "fr" | "finite-range" => CorrelationKind::FiniteRange { rho: nums()? },
        "poly" | "polynomial" => CorrelationKind::Polynomial {
            decay: single("polynomial")?,
        },
        "exp" | "exponential" => CorrelationKind::Exponential {
            rate: single("exponential")?,
        },
        other => {
            return Err(Error::domain(
                MODULE,
                format!("unknown correlation kind `{other}` (iid, fr, poly, exp)"),
            ))
        }
    })
}

/// Short form used on the command line: `iid`, `fr:1,0.2`, `poly:2`,
/// `poly:2:512` (explicit radius), `exp:0.5`.
impl FromStr for CorrelationModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, ':');
        let kind = parts.next().unwrap_or("");
        let params = parts.next().unwrap_or("");
        let radius = parts
            .next()
            .map(|r| {
                r.parse::<usize>()
                    .map_err(|_| Error::domain(MODULE, format!("bad truncation radius `{r}`")))
            })
            .transpose()?;
        Self::build(parse_kind(kind, params)?, radius)
    }
}

impl fmt::Display for CorrelationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CorrelationKind::Iid => write!(f, "iid"),
            CorrelationKind::FiniteRange { rho } => {
                let list: Vec<String> = rho.iter().map(|r| format!("{r}")).collect();
                write!(f, "fr:{}", list.join(","))
            }
            CorrelationKind::Polynomial { decay } => write!(f, "poly:{decay}:{}", self.truncation_radius),
            CorrelationKind::Exponential { rate } => write!(f, "exp:{rate}:{}", self.truncation_radius),
        }
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // endpoints can win on a monotone cell
    [(x, fx), (a, f(a)), (b, f(b))]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Levinson recursion for T x = b, T symmetric Toeplitz with first column
/// `r[0..n]` and r[0] = 1.
fn levinson(r: &[f64], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    x[0] = b[0] / r[0];
    if n == 1 {
        return x;
    }
    y[0] = -r[1] / r[0];
    let mut beta = r[0];
    let mut alpha = y[0];
    for k in 1..n {
        beta *= 1.0 - alpha * alpha;
        let mut s = b[k];
        for i in 0..k {
            s -= r[i + 1] * x[k - 1 - i];
        }
        let mu = s / beta;
        for i in 0..k {
            x[i] += mu * y[k - 1 - i];
        }
        x[k] = mu;
        if k < n - 1 {
            let mut s = -r[k + 1];
            for i in 0..k {
                s -= r[i + 1] * y[k - 1 - i];
            }
            alpha = s / beta;
            for i in 0..k {
                tmp[i] = y[i] + alpha * y[k - 1 - i];
            }
            y[..k].copy_from_slice(&tmp[..k]);
            y[k] = alpha;
        }
    }
    x
}

fn toeplitz_residual(r: &[f64], x: &[f64], b: &[f64]) -> f64 {
    let n = x.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for (j, xj) in x.iter().enumerate() {
            s += r[i.abs_diff(j)] * xj;
        }
        worst = worst.max((s - b[i]).abs());
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_examples() {
        assert_eq!(CorrelationModel::iid().rho(0), 1.0);
        assert_eq!(CorrelationModel::polynomial(2.0).unwrap().rho(1), 0.25);
        assert_eq!(CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap().rho(-1), 0.2);
    }

    #[test]
    fn upsilon_examples() {
        assert_eq!(CorrelationModel::iid().upsilon_infinity(), 1.0);
        let fr = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        assert!((fr.upsilon_infinity() - 1.4).abs() < 1e-15);
        let e = CorrelationModel::exponential(0.5).unwrap();
        let direct: f64 = 1.0 + 2.0 * (1..200).map(|k| (-0.5 * k as f64).exp()).sum::<f64>();
        assert!((e.upsilon_infinity() - direct).abs() < 1e-12);
    }

    #[test]
    fn szego_examples() {
        assert_eq!(CorrelationModel::iid().symbol_min().min, 1.0);
        let fr = CorrelationModel::finite_range(vec![1.0, 0.2]).unwrap();
        assert!((fr.symbol_min().min - 0.6).abs() < 1e-9);
        assert!((fr.symbol_min().argmin - std::f64::consts::PI).abs() < 1e-6);
        let err = CorrelationModel::finite_range(vec![1.0, 0.5]).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn szego_refines_off_grid_minimum() {
        // 1 + 2(0.3 cos λ + 0.3 cos 2λ): minimum off the grid, found by calculus:
        // derivative -0.6 sin λ (1 + 4 cos λ) = 0 → cos λ = -1/4
        let m = CorrelationModel::finite_range(vec![1.0, 0.3, 0.3]).unwrap();
        let c = -0.25f64;
        let expect = 1.0 + 0.6 * c + 0.6 * (2.0 * c * c - 1.0);
        assert!((m.symbol_min().min - expect).abs() < 1e-9, "{:?}", m.symbol_min());
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(CorrelationModel::finite_range(vec![0.9, 0.1]).is_err());
        assert!(CorrelationModel::polynomial(1.0).is_err());
        assert!(CorrelationModel::exponential(-1.0).is_err());
        assert!(CorrelationModel::finite_range(vec![1.0, -0.6]).is_err());
    }

    #[test]
    fn small_toeplitz_solves() {
        let r = CorrelationModel::iid().toeplitz_solve_ones(5).unwrap();
        assert_eq!(r.quad_form, 5.0);
        let fr = CorrelationModel::finite_range(vec![1.0, 0.25]).unwrap();
        let r = fr.toeplitz_solve_ones(2).unwrap();
        assert!((r.solution[0] - 0.8).abs() < 1e-15 && (r.solution[1] - 0.8).abs() < 1e-15);
        assert!((r.quad_form - 1.6).abs() < 1e-14);
        assert!(!r.dense_fallback);
    }

    #[test]
    fn levinson_agrees_with_cholesky() {
        let m = CorrelationModel::polynomial(1.7).unwrap();
        let b: Vec<f64> = (0..60).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let (x, _, _) = m.toeplitz_solve(&b).unwrap();
        let dense = m
            .covariance_matrix(60)
            .cholesky()
            .unwrap()
            .solve(&DVector::from_column_slice(&b));
        for (a, d) in x.iter().zip(dense.iter()) {
            assert!((a - d).abs() < 1e-10);
        }
    }

    #[test]
    fn config_round_trip() {
        let m = CorrelationModel::finite_range(vec![1.0, 0.2, -0.05]).unwrap();
        let back = CorrelationModel::from_config(&m.to_config()).unwrap();
        assert_eq!(m, back);
        let p: CorrelationModel = "poly:2.5:300".parse().unwrap();
        assert_eq!(p.truncation_radius(), 300);
        assert_eq!(CorrelationModel::from_config(&p.to_config()).unwrap(), p);
    }
}
