//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines are always printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use polymerlab::estimators::{quenched_logz, Polymer};
use polymerlab::partition::{enumerate_oracle, AnnealedTransferSpec, Boundary, OracleKind};
use polymerlab::verify::{Runner, SuiteResult};
use polymerlab::{rng, CorrelationModel, RenewalLaw, Result};

const SEED: u64 = 7;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

fn from_suites(results: &[SuiteResult]) -> Outcome {
    let mut details = Vec::new();
    for r in results {
        for c in &r.checks {
            let se = c.stderr.map(|s| format!(" ± {s:.3e}")).unwrap_or_default();
            details.push(format!(
                "{} {}: {}{se} {:?} {} (tol {}) {}",
                r.suite,
                c.name,
                c.measured,
                c.relation,
                c.reference,
                c.tolerance,
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
    }
    Outcome {
        pass: results.iter().all(|r| r.pass),
        details,
    }
}

fn suites(runner: &Runner, ids: &[&str]) -> Result<Outcome> {
    let results: Vec<SuiteResult> = ids.iter().map(|id| runner.run(id)).collect::<Result<_>>()?;
    Ok(from_suites(&results))
}

fn random_model(g: &mut impl Rng) -> CorrelationModel {
    match g.random_range(0..3) {
        0 => CorrelationModel::iid(),
        1 => CorrelationModel::finite_range(vec![1.0, g.random_range(-0.45..0.45)]).unwrap(),
        _ => CorrelationModel::finite_range(vec![1.0, g.random_range(-0.3..0.3), g.random_range(-0.15..0.15)]).unwrap(),
    }
}

fn random_law(g: &mut impl Rng) -> RenewalLaw {
    if g.random_bool(0.5) {
        RenewalLaw::zeta(g.random_range(0.2..1.9)).unwrap()
    } else {
        RenewalLaw::with_head(g.random_range(0.1..0.9), g.random_range(0.3..1.8), 4096).unwrap()
    }
}

/// 100 random instances per engine, N ≤ 16, both boundaries; Z must agree
/// with enumeration to 1e-12 relative, i.e. |Δ log Z| ≤ 1e-12.
#[allow(clippy::needless_range_loop)]
fn oracle_equivalence() -> Result<Outcome> {
    let mut g = rng::stream(rng::derive(SEED, "oracle"), 0);
    let names = ["quenched copolymer", "quenched pinning", "annealed copolymer", "annealed pinning"];
    let mut worst = [0.0f64; 4];
    for engine in 0..4 {
        for _ in 0..100 {
            let n = g.random_range(1..=16);
            let law = random_law(&mut g);
            let model = random_model(&mut g);
            let c = g.random_range(0.0..1.2);
            let h = g.random_range(-1.0..1.0);
            let omega: Vec<f64> = (0..n).map(|_| g.random_range(-3.0..3.0)).collect();
            for b in [Boundary::Constrained, Boundary::Free] {
                let (got, want) = match engine {
                    0 => (
                        quenched_logz(Polymer::Copolymer, &omega, &law, c, h, b)?,
                        enumerate_oracle(&OracleKind::QuenchedCopolymer { omega: &omega, lambda: c, h }, &law, n, b)?,
                    ),
                    1 => (
                        quenched_logz(Polymer::Pinning, &omega, &law, c, h, b)?,
                        enumerate_oracle(&OracleKind::QuenchedPinning { omega: &omega, beta: c, h }, &law, n, b)?,
                    ),
                    2 => {
                        let p = AnnealedTransferSpec::new(&model, &law)?.copolymer(c, h, n)?;
                        let got = if b == Boundary::Free { p.last_free() } else { p.last_constrained() };
                        let kind = OracleKind::AnnealedCopolymer { model: &model, lambda: c, h };
                        (got, enumerate_oracle(&kind, &law, n, b)?)
                    }
                    _ => {
                        let p = AnnealedTransferSpec::new(&model, &law)?.pinning(c, h, n)?;
                        let got = if b == Boundary::Free { p.last_free() } else { p.last_constrained() };
                        let kind = OracleKind::AnnealedPinning { model: &model, beta: c, h };
                        (got, enumerate_oracle(&kind, &law, n, b)?)
                    }
                };
                worst[engine] = worst[engine].max((got - want).abs());
            }
        }
    }
    Ok(Outcome {
        pass: worst.iter().all(|w| *w <= 1e-12),
        details: names
            .iter()
            .zip(worst)
            .map(|(n, w)| format!("{n}: max |Δ log Z| = {w:.2e} over 100 instances x 2 boundaries"))
            .collect(),
    })
}

fn cli_verify_all(workers: &str) -> std::io::Result<(Vec<u8>, Option<i32>)> {
    let out = Command::new(env!("CARGO_BIN_EXE_polymerlab"))
        .args(["verify", "all", "--seed", &SEED.to_string(), "--workers", workers])
        .output()?;
    Ok((out.stdout, out.status.code()))
}

fn determinism() -> Result<Outcome> {
    let (one, code_one) = cli_verify_all("1")?;
    let (two, code_two) = cli_verify_all("2")?;
    Ok(Outcome {
        pass: one == two && !one.is_empty(),
        details: vec![format!(
            "verify all --seed {SEED}: {} bytes with 1 worker (exit {code_one:?}), {} bytes with 2 (exit {code_two:?}), identical: {}",
            one.len(),
            two.len(),
            one == two
        )],
    })
}

fn main() -> ExitCode {
    let runner = Runner::new(SEED).expect("runner");
    type Criterion<'a> = (u32, &'a str, u64, Box<dyn Fn() -> Result<Outcome> + 'a>);
    let criteria: Vec<Criterion> = vec![
        (1, "annealed copolymer formula at N = 2e4", 60, Box::new(|| suites(&runner, &["S1"]))),
        (2, "pinning annealed slope h_a/β² vs −½C_ρ^pin", 300, Box::new(|| suites(&runner, &["S5"]))),
        (3, "constants closed forms", 1, Box::new(|| suites(&runner, &["S4"]))),
        (4, "oracle equivalence at N ≤ 16", 120, Box::new(oracle_equivalence)),
        (5, "change-of-measure identities", 120, Box::new(|| suites(&runner, &["S7"]))),
        (6, "fractional-moment bound", 600, Box::new(|| suites(&runner, &["S6"]))),
        (7, "ergodic limits at N = 1e6", 60, Box::new(|| suites(&runner, &["S8"]))),
        (8, "sandwich at λ = 0.8", 900, Box::new(|| suites(&runner, &["S2"]))),
        (9, "decoupling, interpolation, smoothing", 600, Box::new(|| suites(&runner, &["S9", "S10", "S3"]))),
        (10, "verify all byte-identical across worker counts", u64::MAX, Box::new(determinism)),
    ];
    let mut failures = 0;
    for (id, title, budget, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let within = elapsed <= Duration::from_secs(*budget);
        let (pass, details) = match outcome {
            Ok(o) => (o.pass && within, o.details),
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        if !pass {
            failures += 1;
        }
        let budget_note = if *budget == u64::MAX { String::new() } else { format!(", budget {budget} s") };
        println!(
            "criterion {id:>2} {} {title} ({:.1} s{budget_note})",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        for d in details {
            println!("    {d}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
