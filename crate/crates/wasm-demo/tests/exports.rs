use dunkl_wasm_demo::{kernel_curves, transform_curve, truncated_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn kernel_curves_at_k_zero() {
    let v = parse(&kernel_curves(0.0, 1.0, -1.0, 1.0, 5));
    let xs = v["x"].as_array().unwrap();
    assert_eq!(xs.len(), 5);
    for (i, x) in xs.iter().enumerate() {
        let x = x.as_f64().unwrap();
        assert!((v["phi"][i].as_f64().unwrap() - (2.0 * x).cosh()).abs() < 1e-13);
        assert!((v["psi"][i].as_f64().unwrap() - (2.0 * x).exp()).abs() < 1e-13);
    }
    assert!(parse(&kernel_curves(-0.5, 1.0, 0.0, 1.0, 3)).get("error").is_some());
}

#[test]
fn transform_curve_tracks_oracle() {
    let v = parse(&transform_curve(1.0, "1, 0, -0.5", -2.0, 2.0, 9));
    assert_eq!(v["lambda"].as_array().unwrap().len(), 9);
    assert!(v["max_rel_err"].as_f64().unwrap() < 1e-10);
    assert!(parse(&transform_curve(1.0, "1,x", 0.0, 1.0, 3)).get("error").is_some());
    assert!(parse(&transform_curve(-0.8, "1", 0.0, 1.0, 3)).get("error").is_some());
}

#[test]
fn truncated_export_carries_pass_flag() {
    let v = parse(&truncated_json(2));
    assert_eq!(v["pass"], true);
    assert_eq!(v["dim"], 5);
    assert!(parse(&truncated_json(99)).get("error").is_some());
}
