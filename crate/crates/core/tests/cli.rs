//! Command-line contracts: output shapes, precedence and exit codes.

use std::process::{Command, Output};

fn polymerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymerlab"))
        .args(args)
        .env_remove("POLYMERLAB_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and data rows of a CSV output, provenance lines dropped.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn constants_json_has_cop_slope() {
    let o = polymerlab(&["constants", "--model", "fr:1,0.2", "--law", "zeta:1.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = v["report"]["cop_slope"].as_f64().unwrap();
    assert!(slope > 0.0);
    assert_eq!(v["provenance"]["model"], "fr:1,0.2");
}

#[test]
fn critical_scan_columns_and_sandwich() {
    let o = polymerlab(&[
        "critical-scan", "--coupling", "0.2,0.4", "--method", "annealed-exact", "--n-seq", "1024",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&stdout(&o));
    for col in ["coupling", "hc_lo", "hc_hi", "monthus_ref", "annealed_ref"] {
        assert!(header.iter().any(|h| h == col), "missing column {col}");
    }
    let idx = |c: &str| header.iter().position(|h| h == c).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let m: f64 = r[idx("monthus_ref")].parse().unwrap();
        let a: f64 = r[idx("annealed_ref")].parse().unwrap();
        assert!(m <= a);
    }
}

#[test]
fn flags_override_config_and_both_are_recorded() {
    let dir = std::env::temp_dir().join(format!("polymerlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "n = 64\nh = 0.2\nstride = 32\n").unwrap();
    let o = polymerlab(&["annealed-exact", "--config", cfg.to_str().unwrap(), "--n", "96"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# n = 96\n"));
    assert!(text.contains("# h = 0.2\n"));
    let (_, rows) = csv_rows(&text);
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["32", "64", "96"]);

    // the provenance header is itself a valid config file
    let replay = dir.join("replay.cfg");
    let header: String = text.lines().filter_map(|l| l.strip_prefix("# ")).map(|l| format!("{l}\n")).collect();
    std::fs::write(&replay, header).unwrap();
    let again = polymerlab(&["annealed-exact", "--config", replay.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_defaults_to_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_polymerlab"));
        c.args(["disorder-sample", "--n", "8"]).env_remove("POLYMERLAB_SEED");
        if let Some(e) = env {
            c.env("POLYMERLAB_SEED", e);
        }
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        stdout(&c.output().unwrap())
    };
    let from_env = run(Some("11"), None);
    assert!(from_env.contains("# seed = 11\n"));
    assert_eq!(from_env, run(None, Some("11")));
    assert!(run(Some("11"), Some("12")).contains("# seed = 12\n"));
    assert_ne!(from_env, run(None, None));
}

#[test]
fn exit_codes() {
    assert_eq!(polymerlab(&["free-energy", "--polymer", "nope"]).status.code(), Some(1));
    let o = polymerlab(&["verify", "S99"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("S11"));
    let cap = polymerlab(&["annealed-exact", "--model", "poly:2"]);
    assert_eq!(cap.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&cap.stderr).contains("partition"));
}

#[test]
fn verify_csv_is_reproducible() {
    let a = polymerlab(&["verify", "S4", "--seed", "7", "--format", "csv"]);
    let b = polymerlab(&["verify", "S4", "--seed", "7", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = csv_rows(&stdout(&a));
    assert_eq!(header[0], "suite");
    assert!(rows.iter().all(|r| r.last().unwrap() == "true"));
}

#[test]
fn disorder_dump_matches_csv() {
    let dir = std::env::temp_dir().join(format!("polymerlab-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dump = dir.join("w.bin");
    let o = polymerlab(&["disorder-sample", "--n", "16", "--seed", "5", "--dump", dump.to_str().unwrap()]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    let (seed, _, values) = polymerlab::DisorderPath::read_dump(std::fs::File::open(&dump).unwrap()).unwrap();
    assert_eq!(seed, 5);
    let csv: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(csv, values);
    std::fs::remove_dir_all(&dir).ok();
}
