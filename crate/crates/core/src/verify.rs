//! Named verification suites.
//!
//! Each suite binds one statement to numeric checks with fixed seeds and
//! tolerances. Reference values come from the constants module or a closed
//! form evaluated at run time. Results are deterministic given the seed and
//! carry no timing, so repeated runs are byte-identical.

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use crate::constants::{c_rho_cop, c_rho_pin, slope_report, DEFAULT_TOL};
use crate::correlation::CorrelationModel;
use crate::disorder::{relative_entropy_shift, rn_cost, rn_cost_mc, GaussianSampler, Tilt};
use crate::estimators::{
    annealed_critical_point, annealed_profile, copolymer_block, copolymer_fractional_bound, critical_point,
    decoupling_check, fractional_moment, pinning_block, pinning_fractional_bound, smoothing_check,
    two_replica_quantities, Block, CriticalPointEstimate, CriticalStrategy, Functional, Polymer,
};
use crate::parallel::map_indexed;
use crate::renewal::{pair_average, RenewalLaw};
use crate::rng;
use crate::stats::MeanSe;
use crate::{Error, Result};

pub const ROSTER: [&str; 11] = ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10", "S11"];

pub const DEFAULT_MODEL: &str = "fr:1,0.2";
pub const DEFAULT_LAW: &str = "zeta:1.5";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// |measured − reference| ≤ tolerance
    Within,
    /// measured ≤ reference + tolerance
    AtMost,
    /// measured ≥ reference − tolerance
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub stderr: Option<f64>,
    pub reference: f64,
    /// Where the reference value comes from.
    pub provenance: String,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, relation: Relation, reference: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::Within => (measured - reference).abs() <= tolerance,
            Relation::AtMost => measured <= reference + tolerance,
            Relation::AtLeast => measured >= reference - tolerance,
        };
        Check {
            name: name.into(),
            measured,
            stderr: None,
            reference,
            provenance: String::new(),
            relation,
            tolerance,
            pass,
        }
    }

    fn within(name: impl Into<String>, measured: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Relation::Within, reference, tolerance)
    }

    fn at_most(name: impl Into<String>, measured: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Relation::AtMost, reference, tolerance)
    }

    fn at_least(name: impl Into<String>, measured: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Relation::AtLeast, reference, tolerance)
    }

    fn se(mut self, stderr: f64) -> Self {
        self.stderr = Some(stderr);
        self
    }

    fn from(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }
}

/// A reported quantity that is not itself a pass/fail check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub name: String,
    pub value: f64,
    pub stderr: Option<f64>,
}

fn obs(name: impl Into<String>, value: f64, stderr: Option<f64>) -> Observation {
    Observation {
        name: name.into(),
        value,
        stderr,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    /// Closed form against computation.
    Reference,
    /// One-sided inequality with standard-error slack.
    Inequality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub title: String,
    /// The statement under test, quoted.
    pub statement: String,
    pub kind: SuiteKind,
    pub model: String,
    pub law: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
    /// True iff every check passed.
    pub pass: bool,
}

struct Suite {
    id: &'static str,
    title: &'static str,
    statement: &'static str,
    kind: SuiteKind,
}

const SUITES: [Suite; 11] = [
    Suite {
        id: "S1",
        title: "annealed copolymer free energy",
        statement: "F_a^cop(λ,h) = 2λ(Υ∞λ −h)_+",
        kind: SuiteKind::Reference,
    },
    Suite {
        id: "S2",
        title: "quenched copolymer sandwich",
        statement: "Υ∞/(1+α) ≤ h_c^cop(λ)/λ ≤ h_a^cop(λ)/λ",
        kind: SuiteKind::Inequality,
    },
    Suite {
        id: "S3",
        title: "copolymer smoothing",
        statement: "F(λ, h_c(λ) − δ) ≤ (1+α)/(2Υ∞) δ²",
        kind: SuiteKind::Inequality,
    },
    Suite {
        id: "S4",
        title: "slope constants",
        statement: "C_ρ^cop = Σ ρ_n κ_n; m_α = (2+α)/(2(1+α)); (Υ∞/2μ) α/(1+α)",
        kind: SuiteKind::Reference,
    },
    Suite {
        id: "S5",
        title: "pinning annealed slope",
        statement: "h_a^pin(β)/β² → −½ C_ρ^pin",
        kind: SuiteKind::Reference,
    },
    Suite {
        id: "S6",
        title: "finite-size fractional moments",
        statement: "E[Z^ζ] ≤ exp(ζ(½C_ρ^cop + ζ/2 Υ∞ − u) t); E[Z^ζ] ≤ exp{ζ/μ (u − Υ∞(1−ζ)/(2μ)) t}",
        kind: SuiteKind::Inequality,
    },
    Suite {
        id: "S7",
        title: "change-of-measure identities",
        statement: "Ẽ[(dP/dP̃)^{1/(1−ζ)}]^{1−ζ} = exp(½ζδ²/(1−ζ) ⟨Υ_k^{-1}1,1⟩); H(P̃_L|P) = a²/2 ⟨Υ_L^{-1}1_L,1_L⟩",
        kind: SuiteKind::Reference,
    },
    Suite {
        id: "S8",
        title: "ergodic limits",
        statement: "(1/N)Σρ_nm Δ_nΔ_m → ¼ Υ∞ + ¼ C_ρ^cop; (1/N)Σρ_nm δ_nδ_m → C_ρ^pin/μ; (1/N)Σρ_nm δ_nδ'_m → Υ∞/μ²",
        kind: SuiteKind::Reference,
    },
    Suite {
        id: "S9",
        title: "decoupling inequality",
        statement: "E[f(ω_I) g(ω_J)] ≤ e^{c² C(I,J)} E[f(ω_I)] E[g(ω_J)], C(I,J) = Σ_{i∈I, j∈J} |ρ_ij|",
        kind: SuiteKind::Inequality,
    },
    Suite {
        id: "S10",
        title: "interpolation inequality",
        statement: "F_N^pin ≥ F_a,N^pin − e^{1/M}/M 1/2N log A_N + e^{1/M}/M 1/2N log B_N",
        kind: SuiteKind::Inequality,
    },
    Suite {
        id: "S11",
        title: "annealed copolymer with negative correlations",
        statement: "h_a^cop(λ) ≥ λ(Υ∞ + ½(C_ρ^cop−Υ∞)_+)",
        kind: SuiteKind::Inequality,
    },
];

fn roster() -> String {
    ROSTER.join(", ")
}

/// Canonical suite id: case-insensitive, accepts `s3` and `3`.
pub fn normalize_suite_id(name: &str) -> Result<&'static str> {
    let upper = name.trim().to_ascii_uppercase();
    let key = if upper.starts_with('S') { upper } else { format!("S{upper}") };
    ROSTER.iter().copied().find(|id| *id == key).ok_or_else(|| Error::UnknownSuite {
        name: name.to_string(),
        roster: roster(),
    })
}

/// Runs suites in roster order, sharing intermediate results between them.
pub struct Runner {
    seed: u64,
    model: CorrelationModel,
    law: RenewalLaw,
    critical: OnceCell<CriticalPointEstimate>,
}

impl Runner {
    pub fn new(seed: u64) -> Result<Self> {
        Ok(Runner {
            seed,
            model: DEFAULT_MODEL.parse()?,
            law: DEFAULT_LAW.parse()?,
            critical: OnceCell::new(),
        })
    }

    pub fn run(&self, id: &str) -> Result<SuiteResult> {
        let id = normalize_suite_id(id)?;
        let suite = SUITES.iter().find(|s| s.id == id).unwrap();
        let seed = rng::derive(self.seed, id);
        let (model, law, checks, observations) = match id {
            "S1" => self.s1()?,
            "S2" => self.s2()?,
            "S3" => self.s3(seed)?,
            "S4" => self.s4()?,
            "S5" => self.s5()?,
            "S6" => self.s6(seed)?,
            "S7" => self.s7(seed)?,
            "S8" => self.s8(seed)?,
            "S9" => self.s9(seed)?,
            "S10" => self.s10(seed)?,
            "S11" => self.s11()?,
            _ => unreachable!(),
        };
        let pass = checks.iter().all(|c| c.pass);
        Ok(SuiteResult {
            suite: id.to_string(),
            title: suite.title.to_string(),
            statement: suite.statement.to_string(),
            kind: suite.kind,
            model,
            law,
            seed: self.seed,
            checks,
            observations,
            pass,
        })
    }

    fn default_tags(&self) -> (String, String) {
        (self.model.to_string(), self.law.spec_string())
    }

    fn s1(&self) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let lambda = 0.6;
        let n = 20_000;
        let ups = m.upsilon_infinity();
        let mut checks = Vec::new();
        for frac in [0.4, 1.2] {
            let h = frac * ups * lambda;
            let prof = annealed_profile(Polymer::Copolymer, m, law, lambda, h, n)?;
            let f = prof.last_constrained() / n as f64;
            let want = 2.0 * lambda * (ups * lambda - h).max(0.0);
            checks.push(
                Check::within(format!("F_a(λ=0.6, h={h:.3}) at N={n}"), f, want, 0.01)
                    .from("2λ(Υ∞λ − h)_+ with Υ∞ from the correlation model"),
            );
        }
        let est = annealed_critical_point(m, law, Polymer::Copolymer, lambda, 4096, 0.25 * ups * lambda, 2.0 * ups * lambda)?;
        checks.push(
            Check::within("h_a(λ=0.6)/λ at N=4096", est.extrapolated / lambda, ups, 0.05 * ups)
                .from("h_a^cop(λ) = λΥ∞ for nonnegative correlations"),
        );
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, Vec::new()))
    }

    /// Quenched copolymer threshold at λ = 0.8, shared by S2 and S3.
    fn critical_estimate(&self) -> Result<&CriticalPointEstimate> {
        if let Some(e) = self.critical.get() {
            return Ok(e);
        }
        let report = slope_report(&self.model, &self.law)?;
        let lambda = 0.8;
        let strategy = CriticalStrategy::quenched(
            0.4 * report.monthus * lambda,
            1.1 * report.upsilon_inf * lambda,
            rng::derive(self.seed, "S2"),
        );
        let est = critical_point(&self.model, &self.law, Polymer::Copolymer, lambda, &strategy)?;
        Ok(self.critical.get_or_init(|| est))
    }

    fn s2(&self) -> Result<Outcome> {
        let report = slope_report(&self.model, &self.law)?;
        let est = self.critical_estimate()?;
        let lambda = est.coupling;
        let ratio = est.extrapolated / lambda;
        let checks = vec![
            Check::at_least("ĥ_c/λ ≥ Υ∞/(1+α)", ratio, report.monthus, 0.0).from("constants::slope_report monthus"),
            Check::at_most("ĥ_c/λ ≤ h_a/λ = Υ∞", ratio, report.upsilon_inf, 0.0)
                .from("h_a^cop(λ) = λΥ∞ for nonnegative correlations"),
            Check::at_most("bracket width / λ", (est.h_hi - est.h_lo) / lambda, 0.15, 0.0).from("resolution target"),
        ];
        let mut observations = vec![obs("eps_F", est.eps_f, None)];
        for b in &est.brackets {
            observations.push(obs(format!("bracket midpoint at N={}", b.n), 0.5 * (b.h_lo + b.h_hi), None));
        }
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, observations))
    }

    fn s3(&self, seed: u64) -> Result<Outcome> {
        let est = self.critical_estimate()?;
        let lambda = est.coupling;
        let sm = smoothing_check(&self.model, &self.law, est, &[0.05 * lambda, 0.1 * lambda], 8192, 32, seed)?;
        let checks = sm
            .rows
            .iter()
            .map(|r| {
                Check::at_most(
                    format!("F(λ, ĥ_c − {:.2}) − 3 SE", r.delta),
                    r.f - 3.0 * r.f_stderr,
                    r.bound,
                    r.slack,
                )
                .se(r.f_stderr)
                .from("(1+α)/(2Υ∞) δ², slack from bracket width and eps_F resolution")
            })
            .collect();
        let observations = vec![
            obs("ĥ_c", sm.h_c, None),
            obs("bracket width", sm.bracket_width, None),
            obs("eps_F resolution √(eps_F/K)", sm.resolution, None),
        ];
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, observations))
    }

    fn s4(&self) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let mu = law.mu();
        let rho1 = m.rho(1);
        let cop = c_rho_cop(m, law, DEFAULT_TOL)?;
        let pin = c_rho_pin(m, law, DEFAULT_TOL)?;
        let report = slope_report(m, law)?;
        let iid = slope_report(&CorrelationModel::iid(), law)?;
        let alpha = law.alpha();
        let ups = m.upsilon_infinity();
        let checks = vec![
            Check::within("C_ρ^cop series", cop.value, 1.0 + 2.0 * rho1 * (1.0 - 1.0 / mu), 1e-8)
                .from("1 + 2ρ_1(1 − 1/μ), since κ_0 = 1 and κ_1 = 1 − 1/μ"),
            Check::within("C_ρ^pin series", pin.value, 1.0 + 2.0 * rho1 * law.mass(1), 1e-8)
                .from("1 + 2ρ_1 K(1), since P(1 ∈ τ) = K(1)"),
            Check::within("iid cop_slope", iid.cop_slope, (2.0 + alpha) / (2.0 * (1.0 + alpha)), 1e-12)
                .from("m_α = (2+α)/(2(1+α))"),
            Check::within(
                "pin_gap_slope",
                report.pin_gap_slope,
                ups / (2.0 * mu) * alpha / (1.0 + alpha),
                1e-12,
            )
            .from("(Υ∞/2μ) α/(1+α) with μ from the law"),
        ];
        let observations = vec![
            obs("mu", mu, None),
            obs("C_rho_cop", cop.value, Some(cop.error)),
            obs("C_rho_pin", pin.value, Some(pin.error)),
            obs("cop_slope", report.cop_slope, None),
        ];
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, observations))
    }

    fn s5(&self) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let target = -0.5 * c_rho_pin(m, law, DEFAULT_TOL)?.value;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut observations = Vec::new();
        for beta in [0.3f64, 0.2, 0.1] {
            let b2 = beta * beta;
            let est = annealed_critical_point(m, law, Polymer::Pinning, beta, 4096, -2.0 * b2, 0.5 * b2)?;
            xs.push(b2);
            ys.push(est.extrapolated / b2);
            observations.push(obs(format!("h_a/β² at β={beta}"), est.extrapolated / b2, None));
        }
        let (_, intercept) = linear_fit(&xs, &ys);
        let checks = vec![Check::within("fitted h_a/β² at β → 0", intercept, target, 0.1 * target.abs())
            .from("−½ C_ρ^pin from constants::c_rho_pin")];
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, observations))
    }

    fn s6(&self, seed: u64) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let zeta = 0.6;
        let t = 4.0;
        let replicas = 10_000;
        let report = slope_report(m, law)?;
        let mut checks = Vec::new();
        let mut observations = Vec::new();

        let u = 0.5 * report.c_rho_cop + 0.5 * zeta * report.upsilon_inf + 0.5;
        let bound = copolymer_fractional_bound(m, law, zeta, u, t)?;
        observations.push(obs("copolymer bound", bound, None));
        for lambda in [0.2, 0.1, 0.05] {
            let (h, k) = copolymer_block(u, t, lambda);
            let f = fractional_moment(m, law, Polymer::Copolymer, lambda, h, zeta, k, replicas, rng::derive(seed, "cop"))?;
            observations.push(obs(format!("copolymer E[Z^ζ] at λ={lambda}"), f.mean, Some(f.stderr)));
            let za = annealed_profile(Polymer::Copolymer, m, law, lambda, h, k)?.last_constrained();
            let jensen = (zeta * za).exp();
            checks.push(
                Check::at_most(format!("copolymer E[Z^ζ] ≤ (E Z)^ζ at λ={lambda}"), f.mean, jensen, 3.0 * f.stderr)
                    .se(f.stderr)
                    .from("Jensen with the exact annealed transfer value"),
            );
            if lambda == 0.05 {
                checks.push(
                    Check::at_most("copolymer E[Z^ζ] at λ=0.05", f.mean, bound, 0.1 * bound)
                        .se(f.stderr)
                        .from("exp(ζ(½C_ρ^cop + ζ/2 Υ∞ − u) t), within a factor 1.1"),
                );
            }
        }

        let u = report.upsilon_inf * (1.0 - zeta) / (2.0 * report.mu) - 0.5;
        let bound = pinning_fractional_bound(m, law, zeta, u, t)?;
        observations.push(obs("pinning bound", bound, None));
        for beta in [0.2, 0.1, 0.05] {
            let (h, k) = pinning_block(m, law, u, t, beta)?;
            let f = fractional_moment(m, law, Polymer::Pinning, beta, h, zeta, k, replicas, rng::derive(seed, "pin"))?;
            observations.push(obs(format!("pinning E[Z^ζ] at β={beta}"), f.mean, Some(f.stderr)));
            if beta == 0.05 {
                checks.push(
                    Check::at_most("pinning E[Z^ζ] at β=0.05", f.mean, bound, 0.1 * bound)
                        .se(f.stderr)
                        .from("exp{ζ/μ (u − Υ∞(1−ζ)/(2μ)) t}, within a factor 1.1"),
                );
            }
        }
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, observations))
    }

    fn s7(&self, seed: u64) -> Result<Outcome> {
        let m = &self.model;
        let (zeta, k, delta) = (0.6, 64, 0.05);
        let exact = rn_cost(m, delta, zeta, k)?;
        let mc = rn_cost_mc(m, delta, zeta, k, 100_000, rng::derive(seed, "rn"))?;
        let q = m.toeplitz_solve_ones(4096)?.quad_form;
        let ups = m.upsilon_infinity();

        // E_P̃[log dP̃/dP] for the mean shift a on 1..=L
        let (a, l) = (0.3, 64);
        let entropy = relative_entropy_shift(m, a, l)?;
        let solve = m.toeplitz_solve_ones(l)?;
        let sampler = GaussianSampler::new(m, l)?;
        let es = rng::derive(seed, "entropy");
        let logs: Vec<f64> = map_indexed(20_000, |r| {
            let w = sampler.sample(es, r as u64, Some(Tilt::mean_shift(a, l))).values;
            let dot: f64 = w.iter().zip(&solve.solution).map(|(x, y)| x * y).sum();
            a * dot - 0.5 * a * a * solve.quad_form
        });
        let ent = MeanSe::from_samples(&logs);

        let checks = vec![
            Check::within("rn_cost at δ=0", rn_cost(m, 0.0, zeta, k)?, 1.0, 0.0).from("dP̃/dP ≡ 1"),
            Check::within("rn_cost Monte Carlo (k=64, δ=0.05, ζ=0.6)", mc.mean, exact, 3.0 * mc.stderr)
                .se(mc.stderr)
                .from("closed form via the Toeplitz solve"),
            Check::within("⟨Υ_k^{-1}1,1⟩/k at k=4096", q / 4096.0, 1.0 / ups, 0.02 / ups)
                .from("1/Υ∞, within 2%"),
            Check::within("relative entropy Monte Carlo (L=64, a=0.3)", ent.mean, entropy, 3.0 * ent.stderr)
                .se(ent.stderr)
                .from("a²/2 ⟨Υ_L^{-1}1_L,1_L⟩"),
        ];
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, Vec::new()))
    }

    fn s8(&self, seed: u64) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let n = 1_000_000;
        let replicas = 16;
        let rho = m.rho_seq(m.finite_range_radius().unwrap_or(0) + 1);
        let first = rng::derive(seed, "first");
        let second = rng::derive(seed, "second");
        let rows: Vec<[f64; 3]> = map_indexed(replicas, |r| {
            let a = law.sample_signed_trajectory_stream(n, first, r as u64);
            let b = law.sample_signed_trajectory_stream(n, second, r as u64);
            [
                pair_average(&a.delta, &a.delta, &rho),
                pair_average(&a.contacts, &a.contacts, &rho),
                pair_average(&a.contacts, &b.contacts, &rho),
            ]
        });
        let col = |i: usize| MeanSe::from_samples(&rows.iter().map(|r| r[i]).collect::<Vec<_>>());
        let report = slope_report(m, law)?;
        let (ups, mu) = (report.upsilon_inf, report.mu);
        let refs = [
            (
                "(1/N)Σρ ΔΔ",
                0.25 * ups + 0.25 * report.c_rho_cop,
                "¼Υ∞ + ¼C_ρ^cop from constants",
            ),
            ("(1/N)Σρ δδ", report.c_rho_pin / mu, "C_ρ^pin/μ from constants"),
            ("(1/N)Σρ δδ'", ups / (mu * mu), "Υ∞/μ² from the model and law"),
        ];
        let checks = refs
            .iter()
            .enumerate()
            .map(|(i, (name, want, prov))| {
                let s = col(i);
                Check::within(format!("{name} at N={n}"), s.mean, *want, 3.0 * s.stderr)
                    .se(s.stderr)
                    .from(*prov)
            })
            .collect();
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, vec![obs("replicas", replicas as f64, None)]))
    }

    fn s9(&self, seed: u64) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let (lambda, h, replicas) = (0.4, 0.1, 10_000);
        let kinds = [Functional::Copolymer, Functional::Pinning, Functional::Stretch];
        let mut configs = Vec::new();
        for gap in [0, 1] {
            for f in kinds {
                for g in kinds {
                    configs.push((Block::new(1, 16), Block::new(17 + gap, 16), f, g));
                }
            }
        }
        configs.push((Block::new(1, 8), Block::new(9, 24), Functional::Copolymer, Functional::Stretch));
        configs.push((Block::new(1, 24), Block::new(25, 8), Functional::Pinning, Functional::Copolymer));
        let mut checks = Vec::new();
        for (i, (left, right, f, g)) in configs.into_iter().enumerate() {
            let d = decoupling_check(m, law, left, right, f, g, lambda, h, replicas, rng::derive(seed, &format!("config/{i}")))?;
            checks.push(
                Check::at_least(
                    format!("{f:?}[{}..{}) × {g:?}[{}..{}) relative margin", left.start, left.end(), right.start, right.end()),
                    d.margin / d.rhs,
                    0.0,
                    3.0 * d.margin_stderr / d.rhs,
                )
                .se(d.margin_stderr / d.rhs)
                .from(format!("(rhs − lhs)/rhs, rhs = e^{{c²C(I,J)}} E[f]E[g], c = 2λ, C(I,J) = {}", d.cross)),
            );
        }
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, Vec::new()))
    }

    fn s10(&self, seed: u64) -> Result<Outcome> {
        let (m, law) = (&self.model, &self.law);
        let (beta, h, n, replicas) = (0.3, -0.1, 128, 2000);
        let mut checks = Vec::new();
        let mut observations = Vec::new();
        for mm in [1usize, 5, 25] {
            let q = two_replica_quantities(m, law, beta, h, n, mm, replicas, seed)?;
            checks.push(
                Check::at_least(format!("margin at M={mm}"), q.margin, 0.0, 3.0 * q.margin_stderr)
                    .se(q.margin_stderr)
                    .from("right-hand side from the exact annealed and pair transfer chains"),
            );
            observations.push(obs(format!("log A_N at M={mm}"), q.log_a, Some(q.log_a_stderr)));
            observations.push(obs(format!("log B_N at M={mm}"), q.log_b, Some(q.log_b_stderr)));
        }
        let (mt, lt) = self.default_tags();
        Ok((mt, lt, checks, observations))
    }

    fn s11(&self) -> Result<Outcome> {
        let m: CorrelationModel = "fr:1,-0.3".parse()?;
        let law: RenewalLaw = "head:0.9:1.5".parse()?;
        let report = slope_report(&m, &law)?;
        let ups = report.upsilon_inf;
        let lb = report.ann_cop_lb;
        let reach: f64 = 1.0 + 2.0 * 0.3;
        let mut checks = vec![Check::at_least("C_ρ^cop − Υ∞", report.c_rho_cop - ups, 0.0, 0.0)
            .from("ρ_1 < 0 gives C_ρ^cop = 1 + 2ρ_1(1 − 1/μ) > Υ∞")];
        for lambda in [0.2, 0.5] {
            let est = annealed_critical_point(&m, &law, Polymer::Copolymer, lambda, 4096, 0.0, 2.0 * reach * lambda)?;
            let width = (est.h_hi - est.h_lo) / lambda;
            checks.push(
                Check::at_least(format!("h_a(λ={lambda})/λ"), est.extrapolated / lambda, lb, width)
                    .from("Υ∞ + ½(C_ρ^cop − Υ∞)_+ from constants::slope_report"),
            );
        }
        Ok((m.to_string(), law.spec_string(), checks, vec![obs("Upsilon_inf", ups, None)]))
    }
}

type Outcome = (String, String, Vec<Check>, Vec<Observation>);

/// Least squares y = a x + b; returns (a, b).
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let a = sxy / sxx;
    (a, my - a * mx)
}

pub fn run_suite(id: &str, seed: u64) -> Result<SuiteResult> {
    Runner::new(seed)?.run(id)
}

pub fn run_all(seed: u64) -> Result<Vec<SuiteResult>> {
    let runner = Runner::new(seed)?;
    ROSTER.iter().map(|id| runner.run(id)).collect()
}

/// One CSV row per check, with a header.
pub fn summary_csv(results: &[SuiteResult]) -> String {
    let mut out = String::from("suite,check,measured,stderr,relation,reference,tolerance,pass\n");
    for r in results {
        for c in &r.checks {
            let relation = match c.relation {
                Relation::Within => "within",
                Relation::AtMost => "at-most",
                Relation::AtLeast => "at-least",
            };
            out.push_str(&format!(
                "{},{},{:?},{},{},{:?},{:?},{}\n",
                r.suite,
                csv_field(&c.name),
                c.measured,
                c.stderr.map_or(String::new(), |s| format!("{s:?}")),
                relation,
                c.reference,
                c.tolerance,
                c.pass
            ));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_roster() {
        let err = run_suite("S99", 1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("S99") && msg.contains("S1, S2") && msg.contains("S11"), "{msg}");
    }

    #[test]
    fn suite_ids_normalise() {
        assert_eq!(normalize_suite_id("s4").unwrap(), "S4");
        assert_eq!(normalize_suite_id("10").unwrap(), "S10");
    }

    #[test]
    fn check_relations() {
        assert!(Check::within("x", 1.0, 1.05, 0.1).pass);
        assert!(!Check::within("x", 1.0, 1.2, 0.1).pass);
        assert!(Check::at_most("x", 1.05, 1.0, 0.1).pass);
        assert!(!Check::at_least("x", 0.8, 1.0, 0.1).pass);
    }

    #[test]
    fn constants_suite_passes() {
        let r = run_suite("S4", 1).unwrap();
        assert!(r.pass, "{r:#?}");
    }

    #[test]
    fn fit_recovers_line() {
        let (a, b) = linear_fit(&[1.0, 2.0, 3.0], &[5.0, 7.0, 9.0]);
        assert!((a - 2.0).abs() < 1e-12 && (b - 3.0).abs() < 1e-12);
    }
}
