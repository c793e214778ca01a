//! Browser bindings: slope constants, an exact annealed free-energy curve
//! and a disorder sample, each returned as a JSON string.
//!
//! The `*_json` functions hold the logic and run natively; the
//! `#[wasm_bindgen]` wrappers only convert errors for JavaScript.

use serde_json::json;
use wasm_bindgen::prelude::*;

use polymerlab::constants::slope_report;
use polymerlab::disorder::sample_path;
use polymerlab::estimators::{annealed_profile, Polymer};
use polymerlab::{CorrelationModel, RenewalLaw};

/// Largest size accepted for the annealed curve, to keep the page responsive.
pub const MAX_CURVE_SIZE: usize = 20_000;
pub const MAX_CURVE_POINTS: usize = 400;
pub const MAX_SAMPLE_SIZE: usize = 1 << 20;

fn parse_instance(model: &str, law: &str) -> Result<(CorrelationModel, RenewalLaw), String> {
    let model: CorrelationModel = model.parse().map_err(|e| format!("{e}"))?;
    let law: RenewalLaw = law.parse().map_err(|e| format!("{e}"))?;
    Ok((model, law))
}

pub fn constants_json(model: &str, law: &str) -> Result<String, String> {
    let (model, law) = parse_instance(model, law)?;
    let report = slope_report(&model, &law).map_err(|e| format!("{e}"))?;
    serde_json::to_string(&report).map_err(|e| format!("{e}"))
}

/// (1/N) log E Z_N with a free endpoint at `points` values of h in
/// [h_lo, h_hi].
#[allow(clippy::too_many_arguments)]
pub fn annealed_curve_json(
    polymer: &str,
    model: &str,
    law: &str,
    coupling: f64,
    h_lo: f64,
    h_hi: f64,
    points: usize,
    n: usize,
) -> Result<String, String> {
    let (model, law) = parse_instance(model, law)?;
    let polymer: Polymer = polymer.parse().map_err(|e| format!("{e}"))?;
    if n == 0 || n > MAX_CURVE_SIZE {
        return Err(format!("demo: N must lie in 1..={MAX_CURVE_SIZE}, got {n}"));
    }
    if !(2..=MAX_CURVE_POINTS).contains(&points) {
        return Err(format!("demo: points must lie in 2..={MAX_CURVE_POINTS}, got {points}"));
    }
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let h = h_lo + (h_hi - h_lo) * i as f64 / (points - 1) as f64;
        let prof = annealed_profile(polymer, &model, &law, coupling, h, n).map_err(|e| format!("{e}"))?;
        rows.push(json!({ "h": h, "f": prof.last_free() / n as f64 }));
    }
    Ok(json!({ "polymer": polymer.to_string(), "coupling": coupling, "n": n, "rows": rows }).to_string())
}

pub fn disorder_json(model: &str, n: usize, seed: u64) -> Result<String, String> {
    let model: CorrelationModel = model.parse().map_err(|e| format!("{e}"))?;
    if n == 0 || n > MAX_SAMPLE_SIZE {
        return Err(format!("demo: N must lie in 1..={MAX_SAMPLE_SIZE}, got {n}"));
    }
    let path = sample_path(&model, n, seed, None).map_err(|e| format!("{e}"))?;
    Ok(json!({ "model": model.to_string(), "seed": seed, "values": path.values }).to_string())
}

#[wasm_bindgen]
pub fn slope_constants(model: &str, law: &str) -> Result<String, JsValue> {
    constants_json(model, law).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn annealed_curve(
    polymer: &str,
    model: &str,
    law: &str,
    coupling: f64,
    h_lo: f64,
    h_hi: f64,
    points: usize,
    n: usize,
) -> Result<String, JsValue> {
    annealed_curve_json(polymer, model, law, coupling, h_lo, h_hi, points, n).map_err(|e| JsValue::from_str(&e))
}

/// The seed is a JavaScript number; integers above 2^53 lose precision.
#[wasm_bindgen]
pub fn disorder_sample(model: &str, n: usize, seed: f64) -> Result<String, JsValue> {
    disorder_json(model, n, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_carry_cop_slope() {
        let v: serde_json::Value = serde_json::from_str(&constants_json("fr:1,0.2", "zeta:1.5").unwrap()).unwrap();
        assert!(v["cop_slope"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn annealed_curve_vanishes_past_the_annealed_point() {
        // λΥ∞ = 0.84 at λ = 0.6
        let text = annealed_curve_json("copolymer", "fr:1,0.2", "zeta:1.5", 0.6, 0.0, 1.6, 5, 4000).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let f: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["f"].as_f64().unwrap()).collect();
        assert!(f[0] > 0.9);
        assert!(f[4].abs() < 0.01);
        assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn bad_inputs_are_reported() {
        assert!(constants_json("nope", "zeta:1.5").is_err());
        assert!(annealed_curve_json("copolymer", "iid", "zeta:1.5", 0.5, 0.0, 1.0, 1, 100).is_err());
        assert!(disorder_json("iid", 0, 1).is_err());
    }

    #[test]
    fn disorder_sample_is_seeded() {
        assert_eq!(disorder_json("fr:1,0.2", 32, 9).unwrap(), disorder_json("fr:1,0.2", 32, 9).unwrap());
        assert_ne!(disorder_json("fr:1,0.2", 32, 9).unwrap(), disorder_json("fr:1,0.2", 32, 10).unwrap());
    }
}
