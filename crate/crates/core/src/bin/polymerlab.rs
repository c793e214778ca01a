//! Command-line front end: constants, free-energy and critical scans, exact
//! annealed profiles, verification suites and disorder samples.
//!
//! Every setting can come from a flag or from a flat `key = value` config
//! file; flags win. The resolved settings are written at the top of each
//! output (CSV `# key = value` lines, JSON `provenance` object), so a run can
//! be replayed from its own output. Exit codes: 0 success, 1 domain error,
//! 2 capability error, 3 failed verification suite.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use polymerlab::config::parse_flat;
use polymerlab::constants::slope_report;
use polymerlab::disorder::GaussianSampler;
use polymerlab::estimators::{
    annealed_critical_point, annealed_profile, critical_point, free_energy, CriticalStrategy, FreeEnergyRequest,
    Method, Polymer,
};
use polymerlab::partition::Boundary;
use polymerlab::renewal::parse_masses_csv;
use polymerlab::verify::{self, ROSTER};
use polymerlab::{CorrelationModel, Error, RenewalLaw, Result, Tilt};

const SEED_ENV: &str = "POLYMERLAB_SEED";
const DEFAULT_MODEL: &str = "fr:1,0.2";
const DEFAULT_LAW: &str = "zeta:1.5";
const SUITE_FAILURE: u8 = 3;

/// Keys accepted in a config file. `command`, `version` and `model_hash`
/// appear in provenance headers and are ignored on input.
const CONFIG_KEYS: &[&str] = &[
    "command", "version", "model", "law", "seed", "format", "output", "workers", "polymer", "coupling", "h", "n",
    "replicas", "method", "boundary", "n-seq", "h-lo", "h-hi", "tolerance", "stride", "replica", "tilt", "dump",
    "suite", "model_hash",
];

#[derive(Parser)]
#[command(name = "polymerlab", version, about = "Correlated-disorder pinning and copolymer models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Correlation model: iid, fr:r0,r1,..., poly:d[:R], exp:r[:R]
    #[arg(long, global = true)]
    model: Option<String>,
    /// Renewal law: zeta:A[:G], zeta-trunc:A:G, head:P:A[:G], custom:A:PATH
    #[arg(long, global = true)]
    law: Option<String>,
    /// Master seed; defaults to $POLYMERLAB_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Flat `key = value` file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cap on parallel replica workers
    #[arg(long, global = true)]
    workers: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, false)
    }
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Correlation and renewal constants with the derived slopes
    Constants,
    /// Free energy over a grid of couplings and h values
    FreeEnergy(FreeEnergyArgs),
    /// Critical-point brackets over a coupling grid
    CriticalScan(CriticalArgs),
    /// Exact annealed log E Z_n from the transfer chain
    AnnealedExact(AnnealedArgs),
    /// Run one verification suite or `all`
    Verify(VerifyArgs),
    /// One sampled disorder path
    DisorderSample(DisorderArgs),
}

#[derive(Args)]
struct FreeEnergyArgs {
    /// copolymer or pinning
    #[arg(long)]
    polymer: Option<String>,
    /// Coupling grid (λ or β): `a,b,c` or `lo:hi:count`
    #[arg(long)]
    coupling: Option<String>,
    /// h grid: `a,b,c` or `lo:hi:count`
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    replicas: Option<String>,
    /// quenched-mc, annealed-exact or annealed-mc
    #[arg(long)]
    method: Option<String>,
    /// constrained or free
    #[arg(long)]
    boundary: Option<String>,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long)]
    polymer: Option<String>,
    /// Coupling grid: `a,b,c` or `lo:hi:count`
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long)]
    method: Option<String>,
    /// Sizes for the bisection, comma separated
    #[arg(long = "n-seq")]
    n_seq: Option<String>,
    #[arg(long)]
    replicas: Option<String>,
    #[arg(long)]
    boundary: Option<String>,
    /// Lower end of the h bracket; defaults depend on the polymer
    #[arg(long = "h-lo", allow_hyphen_values = true)]
    h_lo: Option<String>,
    #[arg(long = "h-hi", allow_hyphen_values = true)]
    h_hi: Option<String>,
    /// Bisection stops at this bracket width; default (h_hi − h_lo)/64
    #[arg(long)]
    tolerance: Option<String>,
}

#[derive(Args)]
struct AnnealedArgs {
    #[arg(long)]
    polymer: Option<String>,
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Emit every `stride`-th size (the last size is always emitted)
    #[arg(long)]
    stride: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id (S1..S11) or `all`
    suite: Option<String>,
}

#[derive(Args)]
struct DisorderArgs {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    replica: Option<String>,
    /// none, shift:DELTA:K or exp:DELTA:K
    #[arg(long)]
    tilt: Option<String>,
    /// Also write the binary debug dump to this path
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain {
        module: "cli",
        msg: msg.into(),
    }
}

/// Resolves settings from flags, then the config file, then defaults, and
/// records the result-affecting ones for the provenance header.
struct Settings {
    file: BTreeMap<String, String>,
    provenance: Vec<(String, String)>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| usage(format!("cannot read config `{}`: {e}", p.display())))?;
                parse_flat(&text)?
            }
            None => BTreeMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(usage(format!("unknown config key `{k}` (known: {})", CONFIG_KEYS.join(", "))));
        }
        Ok(Settings {
            file,
            provenance: Vec::new(),
        })
    }

    fn lookup(&self, key: &str, flag: Option<&String>) -> Option<String> {
        flag.cloned().or_else(|| self.file.get(key).cloned())
    }

    /// Resolved and recorded.
    fn get(&mut self, key: &str, flag: Option<&String>, default: &str) -> String {
        let v = self.lookup(key, flag).unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    /// Resolved but not recorded: settings that do not change results.
    fn get_unrecorded(&self, key: &str, flag: Option<&String>) -> Option<String> {
        self.lookup(key, flag)
    }

    fn record(&mut self, key: &str, value: &str) {
        self.provenance.push((key.to_string(), value.to_string()));
    }

    fn parsed<T: FromStr>(&mut self, key: &str, flag: Option<&String>, default: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.get(key, flag, default);
        v.parse().map_err(|e| usage(format!("--{key} `{v}`: {e}")))
    }

    fn grid(&mut self, key: &str, flag: Option<&String>, default: &str) -> Result<Vec<f64>> {
        let v = self.get(key, flag, default);
        parse_grid(&v).map_err(|e| usage(format!("--{key} `{v}`: {e}")))
    }

    fn model(&mut self, flag: Option<&String>) -> Result<CorrelationModel> {
        self.get("model", flag, DEFAULT_MODEL).parse()
    }

    fn law(&mut self, flag: Option<&String>) -> Result<RenewalLaw> {
        let spec = self.get("law", flag, DEFAULT_LAW);
        parse_law(&spec)
    }

    fn seed(&mut self, flag: Option<&String>) -> Result<u64> {
        let v = match self.lookup("seed", flag) {
            Some(v) => v,
            None => std::env::var(SEED_ENV).unwrap_or_else(|_| "0".to_string()),
        };
        self.record("seed", &v);
        v.trim().parse().map_err(|e| usage(format!("seed `{v}`: {e}")))
    }

    fn provenance_map(&self) -> Map<String, Value> {
        self.provenance
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect()
    }
}

/// `custom:ALPHA:PATH` reads a mass file; every other form goes to the
/// library parser.
fn parse_law(spec: &str) -> Result<RenewalLaw> {
    if let Some(rest) = spec.strip_prefix("custom:") {
        let (alpha, path) = rest
            .split_once(':')
            .ok_or_else(|| usage(format!("law `{spec}`: expected custom:ALPHA:PATH")))?;
        let alpha: f64 = alpha
            .parse()
            .map_err(|e| usage(format!("law `{spec}`: bad alpha: {e}")))?;
        let text = fs::read_to_string(path).map_err(|e| usage(format!("law `{spec}`: cannot read `{path}`: {e}")))?;
        return RenewalLaw::custom(alpha, parse_masses_csv(&text)?);
    }
    spec.parse()
}

/// `a,b,c` or `lo:hi:count` (count evenly spaced points, ends included).
fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
        let hi: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
        let count: usize = parts[2].trim().parse().map_err(|e| format!("{e}"))?;
        return match count {
            0 => Err("a range needs at least one point".into()),
            1 => Ok(vec![lo]),
            _ => Ok((0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect()),
        };
    }
    let vals: std::result::Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|e| format!("{e}"))?;
    if vals.is_empty() {
        return Err("empty grid".into());
    }
    Ok(vals)
}

fn parse_sizes(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{e}")))
        .collect()
}

/// What a subcommand produced: rows for CSV, extra top-level JSON fields,
/// or a preformatted CSV body.
struct Emit {
    rows: Vec<Value>,
    extra: Map<String, Value>,
    csv_body: Option<String>,
    failed: bool,
}

impl Emit {
    fn rows(rows: Vec<Value>) -> Self {
        Emit {
            rows,
            extra: Map::new(),
            csv_body: None,
            failed: false,
        }
    }
}

fn csv_field(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Columns follow the key order of the first row.
fn csv_table(rows: &[Value]) -> String {
    let mut out = String::new();
    let Some(Value::Object(first)) = rows.first() else {
        return out;
    };
    let cols: Vec<&String> = first.keys().collect();
    out.push_str(&cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = cols.iter().map(|c| csv_field(row.get(c.as_str()).unwrap_or(&Value::Null))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn render(format: Format, settings: &Settings, emit: &Emit) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in &settings.provenance {
                out.push_str(&format!("# {k} = {v}\n"));
            }
            match &emit.csv_body {
                Some(body) => out.push_str(body),
                None => out.push_str(&csv_table(&emit.rows)),
            }
            Ok(out)
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("provenance".into(), Value::Object(settings.provenance_map()));
            for (k, v) in &emit.extra {
                doc.insert(k.clone(), v.clone());
            }
            if !emit.rows.is_empty() || emit.extra.is_empty() {
                doc.insert("rows".into(), Value::Array(emit.rows.clone()));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn cmd_constants(s: &mut Settings, g: &Global) -> Result<Emit> {
    let model = s.model(g.model.as_ref())?;
    let law = s.law(g.law.as_ref())?;
    let report = serde_json::to_value(slope_report(&model, &law)?)?;
    let mut extra = Map::new();
    extra.insert("report".into(), report.clone());
    Ok(Emit {
        rows: vec![report],
        extra,
        csv_body: None,
        failed: false,
    })
}

fn cmd_free_energy(s: &mut Settings, g: &Global, a: &FreeEnergyArgs) -> Result<Emit> {
    let model = s.model(g.model.as_ref())?;
    let law = s.law(g.law.as_ref())?;
    let seed = s.seed(g.seed.as_ref())?;
    let polymer: Polymer = s.get("polymer", a.polymer.as_ref(), "copolymer").parse()?;
    let couplings = s.grid("coupling", a.coupling.as_ref(), "0.6")?;
    let hs = s.grid("h", a.h.as_ref(), "0:1.2:7")?;
    let n: usize = s.parsed("n", a.n.as_ref(), "4096")?;
    let replicas: usize = s.parsed("replicas", a.replicas.as_ref(), "16")?;
    let method: Method = s.get("method", a.method.as_ref(), "quenched-mc").parse()?;
    let boundary: Boundary = s.get("boundary", a.boundary.as_ref(), "free").parse()?;
    let mut rows = Vec::new();
    for &coupling in &couplings {
        for &h in &hs {
            let req = FreeEnergyRequest {
                polymer,
                coupling,
                h,
                boundary,
                n,
                replicas,
                seed,
                method,
            };
            rows.push(serde_json::to_value(free_energy(&model, &law, &req)?)?);
        }
    }
    Ok(Emit::rows(rows))
}

/// Default h bracket. Copolymer: h_c sits between the Monthus bound and the
/// annealed point. Pinning: h_a ≤ h_c ≤ 0 by Jensen in both directions.
fn default_bracket(model: &CorrelationModel, law: &RenewalLaw, polymer: Polymer, coupling: f64) -> Result<(f64, f64)> {
    let ups = model.upsilon_infinity();
    Ok(match polymer {
        Polymer::Copolymer => {
            let monthus = slope_report(model, law)?.monthus;
            (0.4 * monthus * coupling, 1.1 * ups.abs().max(monthus) * coupling)
        }
        Polymer::Pinning => {
            let b2 = coupling * coupling;
            (-2.0 * ups.abs().max(1.0) * b2, 0.5 * b2)
        }
    })
}

/// Annealed critical point: λΥ∞ for a nonnegative copolymer correlation,
/// otherwise the exact transfer bisection when the range is finite.
fn annealed_reference(model: &CorrelationModel, law: &RenewalLaw, polymer: Polymer, coupling: f64) -> f64 {
    let ups = model.upsilon_infinity();
    if polymer == Polymer::Copolymer && model.is_nonnegative() {
        return ups * coupling;
    }
    if model.finite_range_radius().is_none() {
        return f64::NAN;
    }
    let (lo, hi) = match polymer {
        Polymer::Copolymer => (-2.0 * ups.abs() * coupling - coupling, 2.0 * ups.abs() * coupling + coupling),
        Polymer::Pinning => {
            let b2 = coupling * coupling;
            (-2.0 * ups.abs().max(1.0) * b2, 0.5 * b2)
        }
    };
    annealed_critical_point(model, law, polymer, coupling, 4096, lo, hi)
        .map(|e| e.extrapolated)
        .unwrap_or(f64::NAN)
}

fn cmd_critical_scan(s: &mut Settings, g: &Global, a: &CriticalArgs) -> Result<Emit> {
    let model = s.model(g.model.as_ref())?;
    let law = s.law(g.law.as_ref())?;
    let seed = s.seed(g.seed.as_ref())?;
    let polymer: Polymer = s.get("polymer", a.polymer.as_ref(), "copolymer").parse()?;
    let couplings = s.grid("coupling", a.coupling.as_ref(), "0.8")?;
    let method: Method = s.get("method", a.method.as_ref(), "quenched-mc").parse()?;
    let n_text = s.get("n-seq", a.n_seq.as_ref(), "1024,2048,4096,8192");
    let n_seq = parse_sizes(&n_text).map_err(|e| usage(format!("--n-seq `{n_text}`: {e}")))?;
    let replicas: usize = s.parsed("replicas", a.replicas.as_ref(), "16")?;
    let default_boundary = if method == Method::AnnealedExact { "constrained" } else { "free" };
    let boundary: Boundary = s.get("boundary", a.boundary.as_ref(), default_boundary).parse()?;
    let h_lo: Option<f64> = optional(s, "h-lo", a.h_lo.as_ref())?;
    let h_hi: Option<f64> = optional(s, "h-hi", a.h_hi.as_ref())?;
    let tolerance: Option<f64> = optional(s, "tolerance", a.tolerance.as_ref())?;
    let monthus = match polymer {
        Polymer::Copolymer => slope_report(&model, &law)?.monthus,
        Polymer::Pinning => f64::NAN,
    };
    let mut rows = Vec::new();
    for &coupling in &couplings {
        let (lo, hi) = default_bracket(&model, &law, polymer, coupling)?;
        let (lo, hi) = (h_lo.unwrap_or(lo), h_hi.unwrap_or(hi));
        let mut strategy = match method {
            Method::AnnealedExact => CriticalStrategy::annealed(lo, hi, *n_seq.last().unwrap_or(&4096)),
            _ => CriticalStrategy::quenched(lo, hi, seed),
        };
        strategy.method = method;
        if method != Method::AnnealedExact {
            strategy.n_sequence = n_seq.clone();
            strategy.replicas = replicas;
        }
        strategy.boundary = boundary;
        if let Some(t) = tolerance {
            strategy.tolerance = t;
        }
        let est = critical_point(&model, &law, polymer, coupling, &strategy)?;
        rows.push(json!({
            "polymer": polymer.to_string(),
            "coupling": coupling,
            "hc_lo": est.h_lo,
            "hc_hi": est.h_hi,
            "extrapolated": est.extrapolated,
            "eps_f": est.eps_f,
            "n_max": est.n_sequence.last().copied().unwrap_or(0),
            "monthus_ref": monthus * coupling,
            "annealed_ref": annealed_reference(&model, &law, polymer, coupling),
            "notes": est.notes.join("; "),
        }));
    }
    Ok(Emit::rows(rows))
}

fn optional<T: FromStr>(s: &mut Settings, key: &str, flag: Option<&String>) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match s.lookup(key, flag) {
        None => Ok(None),
        Some(v) => {
            s.record(key, &v);
            v.parse().map(Some).map_err(|e| usage(format!("--{key} `{v}`: {e}")))
        }
    }
}

fn cmd_annealed(s: &mut Settings, g: &Global, a: &AnnealedArgs) -> Result<Emit> {
    let model = s.model(g.model.as_ref())?;
    let law = s.law(g.law.as_ref())?;
    let polymer: Polymer = s.get("polymer", a.polymer.as_ref(), "copolymer").parse()?;
    let coupling: f64 = s.parsed("coupling", a.coupling.as_ref(), "0.6")?;
    let h: f64 = s.parsed("h", a.h.as_ref(), "0.336")?;
    let n: usize = s.parsed("n", a.n.as_ref(), "4096")?;
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let stride: usize = s.parsed("stride", a.stride.as_ref(), &(n / 64).max(1).to_string())?;
    if stride == 0 {
        return Err(usage("--stride must be at least 1"));
    }
    let prof = annealed_profile(polymer, &model, &law, coupling, h, n)?;
    let rows = (1..=n)
        .filter(|k| k % stride == 0 || *k == n)
        .map(|k| {
            let c = prof.constrained[k - 1];
            let f = prof.free[k - 1];
            json!({
                "n": k,
                "log_z_constrained": c,
                "log_z_free": f,
                "f_constrained": c / k as f64,
                "f_free": f / k as f64,
            })
        })
        .collect();
    Ok(Emit::rows(rows))
}

fn cmd_verify(s: &mut Settings, g: &Global, a: &VerifyArgs, format: Format) -> Result<Emit> {
    let suite = s.get("suite", a.suite.as_ref(), "all");
    let seed = s.seed(g.seed.as_ref())?;
    let ids: Vec<&str> = if suite.eq_ignore_ascii_case("all") {
        ROSTER.to_vec()
    } else {
        vec![verify::normalize_suite_id(&suite)?]
    };
    let runner = verify::Runner::new(seed)?;
    let mut results = Vec::new();
    for id in ids {
        let t = Instant::now();
        let r = runner.run(id)?;
        eprintln!(
            "{} {} ({:.1} s)",
            r.suite,
            if r.pass { "pass" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
        results.push(r);
    }
    let failed = results.iter().any(|r| !r.pass);
    let mut extra = Map::new();
    extra.insert("pass".into(), Value::Bool(!failed));
    extra.insert("suites".into(), serde_json::to_value(&results)?);
    Ok(Emit {
        rows: Vec::new(),
        extra,
        csv_body: (format == Format::Csv).then(|| verify::summary_csv(&results)),
        failed,
    })
}

fn parse_tilt(spec: &str) -> Result<Option<Tilt>> {
    if spec == "none" {
        return Ok(None);
    }
    let bad = || usage(format!("tilt `{spec}`: expected none, shift:DELTA:K or exp:DELTA:K"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let delta: f64 = parts[1].parse().map_err(|_| bad())?;
    let window: usize = parts[2].parse().map_err(|_| bad())?;
    match parts[0] {
        "shift" => Ok(Some(Tilt::mean_shift(delta, window))),
        "exp" => Ok(Some(Tilt::exponential(delta, window))),
        _ => Err(bad()),
    }
}

fn cmd_disorder(s: &mut Settings, g: &Global, a: &DisorderArgs) -> Result<Emit> {
    let model = s.model(g.model.as_ref())?;
    let seed = s.seed(g.seed.as_ref())?;
    let n: usize = s.parsed("n", a.n.as_ref(), "1024")?;
    let replica: u64 = s.parsed("replica", a.replica.as_ref(), "0")?;
    let tilt = parse_tilt(&s.get("tilt", a.tilt.as_ref(), "none"))?;
    let path = GaussianSampler::new(&model, n)?.sample(seed, replica, tilt);
    let dump = a.dump.clone().or_else(|| s.get_unrecorded("dump", None).map(PathBuf::from));
    if let Some(p) = dump {
        path.write_dump(fs::File::create(&p)?)?;
    }
    s.record("model_hash", &format!("{:016x}", path.model_hash));
    let rows = path
        .values
        .iter()
        .enumerate()
        .map(|(i, w)| json!({ "site": i + 1, "omega": w }))
        .collect();
    Ok(Emit::rows(rows))
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let mut s = Settings::load(g.config.as_deref())?;
    if let Some(w) = s.get_unrecorded("workers", g.workers.as_ref()) {
        let w: usize = w.parse().map_err(|e| usage(format!("--workers `{w}`: {e}")))?;
        polymerlab::parallel::set_workers(w);
    }
    let (name, default_format) = match &cli.command {
        Command::Constants => ("constants", Format::Json),
        Command::FreeEnergy(_) => ("free-energy", Format::Csv),
        Command::CriticalScan(_) => ("critical-scan", Format::Csv),
        Command::AnnealedExact(_) => ("annealed-exact", Format::Csv),
        Command::Verify(_) => ("verify", Format::Json),
        Command::DisorderSample(_) => ("disorder-sample", Format::Csv),
    };
    s.record("command", name);
    s.record("version", env!("CARGO_PKG_VERSION"));
    let format: Format = match g.format {
        Some(f) => f,
        None => match s.get_unrecorded("format", None) {
            Some(v) => v.parse().map_err(|e| usage(format!("format `{v}`: {e}")))?,
            None => default_format,
        },
    };
    s.record("format", format.name());
    let emit = match &cli.command {
        Command::Constants => cmd_constants(&mut s, g)?,
        Command::FreeEnergy(a) => cmd_free_energy(&mut s, g, a)?,
        Command::CriticalScan(a) => cmd_critical_scan(&mut s, g, a)?,
        Command::AnnealedExact(a) => cmd_annealed(&mut s, g, a)?,
        Command::Verify(a) => cmd_verify(&mut s, g, a, format)?,
        Command::DisorderSample(a) => cmd_disorder(&mut s, g, a)?,
    };
    let text = render(format, &s, &emit)?;
    match g.output.clone().or_else(|| s.get_unrecorded("output", None).map(PathBuf::from)) {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(!emit.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(SUITE_FAILURE),
        Err(e) => {
            eprintln!("polymerlab: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse_lists_and_ranges() {
        assert_eq!(parse_grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let rows = vec![json!({"a": 1.5, "b": "x,y", "c": null})];
        assert_eq!(csv_table(&rows), "a,b,c\n1.5,\"x,y\",\n");
    }

    #[test]
    fn tilts_parse() {
        assert_eq!(parse_tilt("none").unwrap(), None);
        assert_eq!(parse_tilt("shift:0.5:8").unwrap(), Some(Tilt::mean_shift(0.5, 8)));
        assert!(parse_tilt("shift:0.5").is_err());
    }
}
