//! Small numerical kernels shared across modules.

use serde::{Deserialize, Serialize};

/// A value together with a rigorous bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounded {
    pub value: f64,
    pub error: f64,
}

impl Bounded {
    pub fn exact(value: f64) -> Self {
        Bounded { value, error: 0.0 }
    }

    pub fn new(value: f64, error: f64) -> Self {
        Bounded { value, error }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.error
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.error
    }
}

impl std::ops::Add for Bounded {
    type Output = Bounded;
    fn add(self, rhs: Bounded) -> Bounded {
        Bounded::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl std::ops::Sub for Bounded {
    type Output = Bounded;
    fn sub(self, rhs: Bounded) -> Bounded {
        Bounded::new(self.value - rhs.value, self.error + rhs.error)
    }
}

impl std::ops::Mul<f64> for Bounded {
    type Output = Bounded;
    fn mul(self, rhs: f64) -> Bounded {
        Bounded::new(self.value * rhs, self.error * rhs.abs())
    }
}

impl std::ops::Mul for Bounded {
    type Output = Bounded;
    fn mul(self, rhs: Bounded) -> Bounded {
        let value = self.value * rhs.value;
        let error = self.error * rhs.value.abs() + rhs.error * self.value.abs() + self.error * rhs.error;
        Bounded::new(value, error)
    }
}

/// Interval quotient; requires `rhs` bounded away from zero.
impl std::ops::Div for Bounded {
    type Output = Bounded;
    fn div(self, rhs: Bounded) -> Bounded {
        let value = self.value / rhs.value;
        let denom_lo = rhs.value.abs() - rhs.error;
        let error = if denom_lo > 0.0 {
            (self.error + value.abs() * rhs.error) / denom_lo
        } else {
            f64::INFINITY
        };
        Bounded::new(value, error)
    }
}

/// `max` of two intervals: value is the max of the centres, error covers both.
pub fn bounded_max(a: Bounded, b: Bounded) -> Bounded {
    let lo = a.lo().max(b.lo());
    let hi = a.hi().max(b.hi());
    let value = a.value.max(b.value);
    Bounded::new(value, (value - lo).max(hi - value))
}

/// log(sum(exp(x))) over a slice; `-inf` for an empty or all `-inf` slice.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// log(exp(a) + exp(b)).
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// log((1 + e^x) / 2), stable for large |x|.
pub fn log_half_one_plus_exp(x: f64) -> f64 {
    let sp = if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    };
    sp - std::f64::consts::LN_2
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

// B_{2j} / (2j)!
const EM_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// Σ_{m ≥ start} m^{-s} for s > 1 and start ≥ 1, via Euler–Maclaurin.
///
/// The returned error is the magnitude of the first omitted correction term,
/// which bounds the remainder for this completely monotone summand.
pub fn power_tail(s: f64, start: u64) -> Bounded {
    assert!(s > 1.0, "power_tail requires s > 1");
    assert!(start >= 1);
    // Sum a few leading terms explicitly so the expansion point is large.
    let shift = 16u64.saturating_sub(start);
    let mut head = NeumaierSum::new();
    for m in start..start + shift {
        head.add((m as f64).powf(-s));
    }
    let m = (start + shift) as f64;
    let mut total = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s);
    // derivative factor s (s+1) ... (s + 2j - 2) times m^{-s-2j+1}
    let mut rising = s;
    let mut power = m.powf(-s - 1.0);
    let mut last = 0.0;
    for (j, c) in EM_COEFFS.iter().enumerate() {
        let term = c * rising * power;
        if j + 1 == EM_COEFFS.len() {
            last = term.abs();
            break;
        }
        total += term;
        rising *= (s + 2.0 * j as f64 + 1.0) * (s + 2.0 * j as f64 + 2.0);
        power /= m * m;
    }
    head.add(total);
    Bounded::new(head.total(), last + 4.0 * f64::EPSILON * head.total().abs())
}

/// Riemann zeta for s > 1.
pub fn zeta(s: f64) -> Bounded {
    power_tail(s, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        let z2 = zeta(2.0);
        assert!((z2.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(z2.error < 1e-12);
        let z4 = zeta(4.0);
        assert!((z4.value - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-14);
        // zeta(1.5) = 2.612375348685488...
        assert!((zeta(1.5).value - 2.612_375_348_685_488).abs() < 1e-12);
    }

    #[test]
    fn power_tail_matches_partial_sums() {
        // tail from 5 = zeta(3) - (1 + 1/8 + 1/27 + 1/64)
        let head: f64 = (1..5).map(|m| (m as f64).powi(-3)).sum();
        let t = power_tail(3.0, 5);
        assert!((t.value - (zeta(3.0).value - head)).abs() < 1e-14);
    }

    #[test]
    fn half_one_plus_exp_is_stable() {
        assert!((log_half_one_plus_exp(0.0)).abs() < 1e-16);
        assert!((log_half_one_plus_exp(1e4) - (1e4 - std::f64::consts::LN_2)).abs() < 1e-9);
        assert!((log_half_one_plus_exp(-1e4) + std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn logsumexp_handles_extremes() {
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        let v = logsumexp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((logaddexp(-1e300, 0.0)).abs() < 1e-300);
    }

    #[test]
    fn neumaier_recovers_small_terms() {
        let mut s = NeumaierSum::new();
        s.extend([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s.total(), 2.0);
    }
}
