use nsdq_wasm::{duct_curves, ellipsoid_curves, path_points};

#[test]
fn curves_have_rows() {
    let v: serde_json::Value = serde_json::from_str(&ellipsoid_curves(&[2, 4], 20, 100.0, 1000.0, 4).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["rows"].as_array().unwrap().len(), 4);
    let d: serde_json::Value = serde_json::from_str(&duct_curves(4, 10.0, 100.0, 3).unwrap()).unwrap();
    assert_eq!(d[1]["label"], "direct");
}

#[test]
fn paths_have_small_residuals() {
    let v: serde_json::Value = serde_json::from_str(&path_points("sphere", 50.0, 0.3, 0.2, 0.5, 20).unwrap()).unwrap();
    let path = v["path"].as_array().unwrap();
    assert_eq!(path.len(), 20);
    assert!(path.iter().all(|s| s["residual"].as_f64().unwrap() <= 1e-12));
    assert!(!v["nodes"].as_array().unwrap().is_empty());
    assert!(path_points("cube", 50.0, 0.0, 0.0, 1.0, 3).is_err());
    assert!(path_points("ellipsoid", 50.0, 1.0, 1.0, -1.0, 3).is_err());
}
