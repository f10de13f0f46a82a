//! Browser demo bindings. Every function returns a JSON string so the page
//! needs no generated types.

use nsdq_core::experiments::scenes::{ellipsoid_scene_traced, sphere_incidence, sphere_scene};
use nsdq_core::experiments::{log_grid, run_duct, run_ellipsoid, to_json, DuctConfig, DuctMode};
use nsdq_core::path::{trace_origin_path, Direction};
use nsdq_core::rules::gauss_exp_power;
use nsdq_core::Result;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn finish(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Ellipsoid error against the closed form on `count` log-spaced
/// frequencies, for every radial rule size in `ms`.
#[wasm_bindgen]
pub fn ellipsoid_error_curve(
    ms: Vec<u32>,
    outer: usize,
    omega_min: f64,
    omega_max: f64,
    count: usize,
) -> std::result::Result<String, JsValue> {
    finish(ellipsoid_curves(&ms, outer, omega_min, omega_max, count))
}

/// JSON curves behind [`ellipsoid_error_curve`].
pub fn ellipsoid_curves(ms: &[u32], outer: usize, lo: f64, hi: f64, count: usize) -> Result<String> {
    let grid = log_grid(lo, hi, count)?;
    let mut curves = Vec::new();
    for &m in ms {
        let rows = run_ellipsoid(&grid, m as usize, outer, outer)?;
        curves.push(json!({ "label": format!("m = {m}"), "rows": serde_json::from_str::<serde_json::Value>(&to_json(&rows)).expect("valid json") }));
    }
    Ok(serde_json::to_string(&curves).expect("valid json"))
}

/// Duct relative error for the polar corner decomposition and the
/// Cartesian one with `n_gl` Gauss-Laguerre points.
#[wasm_bindgen]
pub fn duct_comparison(n_gl: usize, omega_min: f64, omega_max: f64, count: usize) -> std::result::Result<String, JsValue> {
    finish(duct_curves(n_gl, omega_min, omega_max, count))
}

/// JSON curves behind [`duct_comparison`].
pub fn duct_curves(n_gl: usize, lo: f64, hi: f64, count: usize) -> Result<String> {
    let grid = log_grid(lo, hi, count)?;
    let mut curves = Vec::new();
    for mode in [DuctMode::Corner, DuctMode::Direct, DuctMode::DirectModified] {
        let rows = run_duct(&grid, &DuctConfig::new(n_gl, mode))?;
        curves.push(json!({ "label": mode.name(), "rows": serde_json::from_str::<serde_json::Value>(&to_json(&rows)).expect("valid json") }));
    }
    Ok(serde_json::to_string(&curves).expect("valid json"))
}

/// Steepest-descent path out of the special point, sampled at `count`
/// points `p` in `(0, p_max]`. `scene` is `"ellipsoid"` (direction
/// `(phi_1, phi_2)` = `(a, b)`) or `"sphere"` (angle `a`, incidence `b`).
#[wasm_bindgen]
pub fn trace_path(scene: &str, omega: f64, a: f64, b: f64, p_max: f64, count: usize) -> std::result::Result<String, JsValue> {
    finish(path_points(scene, omega, a, b, p_max, count))
}

/// JSON samples behind [`trace_path`].
pub fn path_points(scene: &str, omega: f64, a: f64, b: f64, p_max: f64, count: usize) -> Result<String> {
    let (scene, dir) = match scene {
        "ellipsoid" => (ellipsoid_scene_traced(omega)?, Direction::new(&[a, b])?),
        "sphere" => (sphere_scene(omega, sphere_incidence(b))?, Direction::planar(a)),
        other => {
            return Err(nsdq_core::Error::InvalidArgument(format!(
                "unknown scene {other:?}; expected ellipsoid or sphere"
            )))
        }
    };
    if !(p_max > 0.0) || count == 0 {
        return Err(nsdq_core::Error::InvalidArgument("need p_max > 0 and count > 0".into()));
    }
    let ps: Vec<f64> = (1..=count).map(|k| p_max * k as f64 / count as f64).collect();
    let samples = trace_origin_path(&scene, &dir, &ps)?;
    let nodes: Vec<f64> = gauss_exp_power(8, 1, 0)?.nodes.iter().map(|x| x / omega).filter(|p| *p <= p_max).collect();
    let node_samples = trace_origin_path(&scene, &dir, &nodes)?;
    let pts = |s: &[nsdq_core::path::PathSample]| {
        s.iter()
            .map(|s| json!({ "p": s.p, "re": s.rho.re, "im": s.rho.im, "residual": s.residual }))
            .collect::<Vec<_>>()
    };
    Ok(json!({ "path": pts(&samples), "nodes": pts(&node_samples) }).to_string())
}
