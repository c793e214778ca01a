//! Invariants checked on random instances.

use polymerlab::config::{parse_flat, write_flat};
use polymerlab::disorder::{sample_path, DisorderPath};
use polymerlab::estimators::{quenched_logz, Polymer};
use polymerlab::partition::{enumerate_oracle, AnnealedTransferSpec, Boundary, OracleKind};
use polymerlab::renewal::pair_average;
use polymerlab::{rng, CorrelationModel, RenewalLaw};
use proptest::prelude::*;

fn small_model() -> impl Strategy<Value = CorrelationModel> {
    prop_oneof![
        Just(CorrelationModel::iid()),
        (-0.45f64..0.45).prop_map(|r| CorrelationModel::finite_range(vec![1.0, r]).unwrap()),
        (-0.3f64..0.3, -0.15f64..0.15).prop_map(|(a, b)| CorrelationModel::finite_range(vec![1.0, a, b]).unwrap()),
    ]
}

fn small_law() -> impl Strategy<Value = RenewalLaw> {
    prop_oneof![
        (0.2f64..1.9).prop_map(|a| RenewalLaw::zeta(a).unwrap()),
        (0.1f64..0.9, 0.3f64..1.8).prop_map(|(p, a)| RenewalLaw::with_head(p, a, 4096).unwrap()),
    ]
}

fn environment(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

fn boundary() -> impl Strategy<Value = Boundary> {
    prop_oneof![Just(Boundary::Constrained), Just(Boundary::Free)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quenched_copolymer_matches_enumeration(
        law in small_law(), omega in environment(12), lambda in 0.0f64..1.5, h in -1.0f64..1.0, b in boundary(),
    ) {
        let n = omega.len();
        let dp = quenched_logz(Polymer::Copolymer, &omega, &law, lambda, h, b).unwrap();
        let brute = enumerate_oracle(&OracleKind::QuenchedCopolymer { omega: &omega, lambda, h }, &law, n, b).unwrap();
        prop_assert!((dp - brute).abs() <= 1e-12 * brute.abs().max(1.0), "{dp} vs {brute}");
    }

    #[test]
    fn quenched_pinning_matches_enumeration(
        law in small_law(), omega in environment(12), beta in 0.0f64..1.5, h in -1.0f64..1.0, b in boundary(),
    ) {
        let n = omega.len();
        let dp = quenched_logz(Polymer::Pinning, &omega, &law, beta, h, b).unwrap();
        let brute = enumerate_oracle(&OracleKind::QuenchedPinning { omega: &omega, beta, h }, &law, n, b).unwrap();
        prop_assert!((dp - brute).abs() <= 1e-12 * brute.abs().max(1.0), "{dp} vs {brute}");
    }

    #[test]
    fn annealed_transfer_matches_enumeration(
        model in small_model(), law in small_law(), c in 0.0f64..1.0, h in -0.8f64..0.8, n in 1usize..=12,
    ) {
        let spec = AnnealedTransferSpec::new(&model, &law).unwrap();
        let cop = spec.copolymer(c, h, n).unwrap();
        let pin = spec.pinning(c, h, n).unwrap();
        for (b, got_cop, got_pin) in [
            (Boundary::Constrained, cop.last_constrained(), pin.last_constrained()),
            (Boundary::Free, cop.last_free(), pin.last_free()),
        ] {
            let want_cop = enumerate_oracle(&OracleKind::AnnealedCopolymer { model: &model, lambda: c, h }, &law, n, b).unwrap();
            let want_pin = enumerate_oracle(&OracleKind::AnnealedPinning { model: &model, beta: c, h }, &law, n, b).unwrap();
            prop_assert!((got_cop - want_cop).abs() <= 1e-12 * want_cop.abs().max(1.0));
            prop_assert!((got_pin - want_pin).abs() <= 1e-12 * want_pin.abs().max(1.0));
        }
    }

    /// Each copolymer weight exp(−2λΣ(ω+h)Δ) decreases in h; each pinning
    /// weight exp(Σ(βω+h)δ) increases.
    #[test]
    fn log_z_is_monotone_in_h(law in small_law(), omega in environment(40), c in 0.0f64..1.0, h in -1.0f64..1.0, dh in 0.0f64..0.5) {
        let b = Boundary::Free;
        let cop = |h| quenched_logz(Polymer::Copolymer, &omega, &law, c, h, b).unwrap();
        let pin = |h| quenched_logz(Polymer::Pinning, &omega, &law, c, h, b).unwrap();
        prop_assert!(cop(h + dh) <= cop(h) + 1e-12);
        prop_assert!(pin(h + dh) >= pin(h) - 1e-12);
    }

    /// Paths with no renewal up to N and the upper sign carry weight 1, so
    /// Z^cop ≥ ½P(τ1 > N) under the free endpoint.
    #[test]
    fn copolymer_log_z_is_at_least_the_upper_excursion(law in small_law(), omega in environment(30), lambda in 0.0f64..1.0, h in -1.0f64..1.0) {
        let n = omega.len();
        let logz = quenched_logz(Polymer::Copolymer, &omega, &law, lambda, h, Boundary::Free).unwrap();
        let floor = (0.5 * law.survival(n + 1)).ln();
        prop_assert!(logz >= floor - 1e-12);
    }

    /// Jensen: E log Z ≤ log E Z. At N = 10 the noise of a 400-replica mean
    /// is far below the 0.1 allowance.
    #[test]
    fn annealed_dominates_quenched_average(model in small_model(), law in small_law(), c in 0.05f64..0.8, h in -0.5f64..0.5, seed in any::<u64>()) {
        let n = 10;
        let spec = AnnealedTransferSpec::new(&model, &law).unwrap();
        let annealed = spec.pinning(c, h, n).unwrap().last_free();
        let sampler = polymerlab::GaussianSampler::new(&model, n).unwrap();
        let reps = 400;
        let mean: f64 = (0..reps)
            .map(|r| quenched_logz(Polymer::Pinning, &sampler.sample(seed, r, None).values, &law, c, h, Boundary::Free).unwrap())
            .sum::<f64>() / reps as f64;
        prop_assert!(mean <= annealed + 0.1, "E log Z {mean} vs log E Z {annealed}");
    }

    #[test]
    fn pair_average_is_symmetric(
        x in prop::collection::vec(0u8..2, 1..40), y_seed in any::<u64>(), r1 in -0.4f64..0.4, r2 in -0.2f64..0.2,
    ) {
        use rand::Rng;
        let mut g = rng::stream(y_seed, 0);
        let y: Vec<u8> = (0..x.len()).map(|_| g.random_range(0..2u8)).collect();
        let rho = [1.0, r1, r2];
        let a = pair_average(&x, &y, &rho);
        let b = pair_average(&y, &x, &rho);
        prop_assert!((a - b).abs() <= 1e-14);
    }

    #[test]
    fn flat_config_round_trips(entries in prop::collection::btree_map("[a-z][a-z0-9_-]{0,8}", "[A-Za-z0-9.,:-]{1,12}", 0..8)) {
        let text = write_flat(entries.iter().map(|(k, v)| (k.as_str(), v.clone())));
        prop_assert_eq!(parse_flat(&text).unwrap(), entries);
    }

    #[test]
    fn model_strings_round_trip(model in small_model()) {
        let back: CorrelationModel = model.to_string().parse().unwrap();
        prop_assert_eq!(back.rho_seq(4), model.rho_seq(4));
        let from_cfg = CorrelationModel::from_config(&model.to_config()).unwrap();
        prop_assert_eq!(from_cfg.rho_seq(4), model.rho_seq(4));
    }

    #[test]
    fn disorder_dump_round_trips(model in small_model(), n in 1usize..200, seed in any::<u64>()) {
        let path = sample_path(&model, n, seed, None).unwrap();
        let mut buf = Vec::new();
        path.write_dump(&mut buf).unwrap();
        let (s, hash, values) = DisorderPath::read_dump(buf.as_slice()).unwrap();
        prop_assert_eq!(s, seed);
        prop_assert_eq!(hash, path.model_hash);
        prop_assert_eq!(values, path.values);
    }

    #[test]
    fn toeplitz_solutions_have_small_residual(model in small_model(), k in 1usize..300) {
        let sol = model.toeplitz_solve_ones(k).unwrap();
        let rho = model.rho_seq(k);
        for i in 0..k {
            let row: f64 = (0..k).map(|j| rho[i.abs_diff(j)] * sol.solution[j]).sum();
            prop_assert!((row - 1.0).abs() < 1e-9);
        }
        prop_assert!(sol.quad_form > 0.0);
    }

    #[test]
    fn streams_are_reproducible(seed in any::<u64>(), replica in any::<u64>()) {
        use rand::Rng;
        let a: u64 = rng::stream(seed, replica).random();
        let b: u64 = rng::stream(seed, replica).random();
        prop_assert_eq!(a, b);
        prop_assert_ne!(rng::derive(seed, "a"), rng::derive(seed, "b"));
    }
}
