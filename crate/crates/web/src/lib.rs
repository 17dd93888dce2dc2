//! Browser bindings: the interaction-symbol calculator, a weak-field
//! mid-plane slice and a fan of null geodesics.
//!
//! Every export takes and returns JSON strings so the same functions run
//! natively in tests.

use emwave_core::appendix::reference_config;
use emwave_core::causal::{
    first_conjugate_time, geodesic_trace, TraceOptions, WarpedMetric, WarpedProduct,
};
use emwave_core::io::{parse_config, to_json, ConfigFile, SymbolReport};
use emwave_core::symbol::symbol_breakdown;
use emwave_core::weakfield::{run_simulation, SimulationConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Reference configuration `set ∈ 0..5` as editable JSON.
#[wasm_bindgen]
pub fn reference_config_json(set: usize) -> Result<String, String> {
    if set >= 5 {
        return Err(format!("reference set {set} does not exist (0..=4)"));
    }
    Ok(to_json(&ConfigFile::from_config(&reference_config(set))))
}

/// Exact interaction symbol of a JSON configuration.
#[wasm_bindgen]
pub fn symbol_report(config_json: &str) -> Result<String, String> {
    let cfg = parse_config(config_json).map_err(|e| e.to_string())?;
    let b = symbol_breakdown(&cfg).map_err(|e| e.to_string())?;
    Ok(to_json(&SymbolReport::new(&b)))
}

#[derive(Serialize)]
struct Slice {
    points: usize,
    steps: usize,
    /// `|g₁|` on the mid-plane, row-major with `x` fastest.
    values: Vec<f64>,
    tube_ratio: f64,
    h2_00_max_violation: f64,
}

/// Runs the standard weak-field setup on a small grid and returns the
/// mid-plane `|g₁|`.
#[wasm_bindgen]
pub fn simulation_slice(points: usize) -> Result<String, String> {
    if !(9..=49).contains(&points) {
        return Err(format!("points must lie in 9..=49, got {points}"));
    }
    let mut cfg = SimulationConfig::standard(points, 0.2).map_err(|e| e.to_string())?;
    cfg.response_lambda = None;
    cfg.leak_check_step = None;
    let out = run_simulation(&cfg).map_err(|e| e.to_string())?;
    let g = cfg.grid;
    let norm = out.g1.pointwise_norm();
    let z = points / 2;
    let values = (0..points)
        .flat_map(|y| (0..points).map(move |x| (x, y)))
        .map(|(x, y)| norm[g.index(x, y, z)])
        .collect();
    let slice = Slice {
        points,
        steps: g.steps,
        values,
        tube_ratio: out.diagnostics.tube.ratio,
        h2_00_max_violation: out.diagnostics.h2_00_max_violation,
    };
    Ok(to_json(&slice))
}

#[derive(Serialize)]
struct Ray {
    angle: f64,
    /// `(y¹, y²)` samples.
    path: Vec<[f64; 2]>,
    conjugate: Option<f64>,
}

/// Null geodesics in the `y¹y²`-plane from `y = (-1/2, 0, 0)`. `metric_json`
/// names a family, e.g. `{"family": "round-sphere", "radius": 1}`.
#[wasm_bindgen]
pub fn geodesic_fan(metric_json: &str, rays: usize, horizon: f64) -> Result<String, String> {
    let metric: WarpedMetric = serde_json::from_str(metric_json).map_err(|e| e.to_string())?;
    if rays == 0 || rays > 256 || !(horizon > 0.0) {
        return Err("need 1..=256 rays and a positive horizon".into());
    }
    let origin = [0.0, -0.5, 0.0, 0.0];
    let k = metric.spatial(&origin)[0][0].sqrt();
    let opts = TraceOptions {
        h_max: horizon / 64.0,
        ..TraceOptions::default()
    };
    let mut out = Vec::with_capacity(rays);
    for r in 0..rays {
        let angle = 2.0 * std::f64::consts::PI * r as f64 / rays as f64;
        let theta = [1.0, angle.cos() / k, angle.sin() / k, 0.0];
        let curve =
            geodesic_trace(&metric, origin, theta, horizon, &opts).map_err(|e| e.to_string())?;
        let conjugate = first_conjugate_time(&metric, origin, theta, horizon, &opts)
            .map_err(|e| e.to_string())?;
        out.push(Ray {
            angle,
            path: curve.samples.iter().map(|s| [s.x[1], s.x[2]]).collect(),
            conjugate,
        });
    }
    Ok(to_json(&out))
}
