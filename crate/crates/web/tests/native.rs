use emwave_web::{geodesic_fan, reference_config_json, simulation_slice, symbol_report};

#[test]
fn symbol_calculator_reproduces_the_first_t_vector() {
    let cfg = reference_config_json(0).unwrap();
    let report: serde_json::Value = serde_json::from_str(&symbol_report(&cfg).unwrap()).unwrap();
    let t: Vec<&str> = report["t_vector"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["exact"].as_str().unwrap())
        .collect();
    assert_eq!(t, ["-53/10", "-7/10", "21/10", "49/10", "-9/2"]);
    assert!(reference_config_json(5).is_err());
    assert!(symbol_report("{").is_err());
}

#[test]
fn slice_has_one_value_per_mid_plane_cell() {
    let s: serde_json::Value = serde_json::from_str(&simulation_slice(17).unwrap()).unwrap();
    let values = s["values"].as_array().unwrap();
    assert_eq!(values.len(), 17 * 17);
    assert!(values.iter().any(|v| v.as_f64().unwrap() > 0.0));
    assert_eq!(s["h2_00_max_violation"].as_f64().unwrap(), 0.0);
    assert!(simulation_slice(3).is_err());
}

#[test]
fn sphere_fan_refocuses_at_the_antipode() {
    let rays: serde_json::Value = serde_json::from_str(
        &geodesic_fan(r#"{"family": "round-sphere", "radius": 1}"#, 3, 3.5).unwrap(),
    )
    .unwrap();
    for r in rays.as_array().unwrap() {
        let s = r["conjugate"].as_f64().unwrap();
        assert!((s - std::f64::consts::PI).abs() < 1e-6);
    }
    let all: serde_json::Value = serde_json::from_str(
        &geodesic_fan(r#"{"family": "round-sphere", "radius": 1}"#, 4, 3.5).unwrap(),
    )
    .unwrap();
    assert_eq!(all.as_array().unwrap().len(), 4);
    let flat: serde_json::Value =
        serde_json::from_str(&geodesic_fan(r#"{"family": "minkowski"}"#, 3, 2.0).unwrap()).unwrap();
    assert!(flat
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["conjugate"].is_null()));
    assert!(geodesic_fan(r#"{"family": "kerr"}"#, 3, 2.0).is_err());
}
