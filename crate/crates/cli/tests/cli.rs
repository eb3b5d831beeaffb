use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn elastnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = elastnet(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, pointer: &str) -> f64 {
    v.pointer(pointer)
        .and_then(Value::as_f64)
        .unwrap_or_else(|| panic!("missing {pointer} in {v}"))
}

#[test]
fn eight_report() {
    let v = json(&["eight", "--delta", "1"]);
    assert!((num(&v, "/closure/m") - 0.826115).abs() < 5e-6);
    assert!((num(&v, "/energy/total") - 21.2075).abs() < 5e-3);
    assert!((num(&v, "/junction_angles_deg/small") - 81.4).abs() < 0.1);
    assert!((num(&v, "/junction_angles_deg/large") - 98.6).abs() < 0.1);
}

#[test]
fn double_bubble_report() {
    let v = json(&["competitor", "double-bubble"]);
    assert!((num(&v, "/closed_form/total") - 18.4059).abs() < 1e-3);
    let r = num(&v, "/optimal_radius");
    assert!((num(&v, "/radius") - r).abs() < 1e-12);
    assert_eq!(v.pointer("/network/classification").unwrap(), "Theta");
}

#[test]
fn rescale_unit_circle() {
    let v = json(&["rescale", "--A", "6.2831853", "--B", "6.2831853", "--alpha", "1", "--beta", "1"]);
    assert_eq!(num(&v, "/lambda_opt"), 1.0);
    assert!((num(&v, "/energy_at_optimal") - 4.0 * PI).abs() < 1e-6);
    let c = json(&["rescale", "--A", "1", "--B", "4", "--alpha", "1", "--beta", "1", "--B0", "2"]);
    assert_eq!(num(&c, "/constrained_scale_factor"), 0.5);
}

#[test]
fn numbers_have_ten_significant_digits() {
    let out = elastnet(&["eight"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"total\": 21.20750902,"), "{text}");
}

#[test]
fn output_is_deterministic() {
    for args in [&["eight"][..], &["competitor", "angles", "90", "135", "135", "--nodes", "256"], &["drop", "--csv"]] {
        let a = elastnet(args);
        let b = elastnet(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(elastnet(&["nonsense"]).status.code(), Some(2));
    assert_eq!(elastnet(&["eight", "--delta", "abc"]).status.code(), Some(2));
    assert_eq!(elastnet(&["--csv", "--json", "eight"]).status.code(), Some(2));
    assert_eq!(elastnet(&["eight", "--delta", "-1"]).status.code(), Some(1));
    assert_eq!(elastnet(&["elliptic", "K", "1"]).status.code(), Some(1));
    assert_eq!(elastnet(&["curve", "/definitely/not/here.json"]).status.code(), Some(1));
    assert_eq!(elastnet(&["--help"]).status.code(), Some(0));
    let drop_emit = elastnet(&["drop", "--emit-network", "/tmp/never-written.json"]);
    assert_eq!(drop_emit.status.code(), Some(1));
}

#[test]
fn csv_samples() {
    let out = elastnet(&["eight", "--csv", "--nodes", "128"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,x,y,k"));
    assert_eq!(lines.count(), 128);

    let out = elastnet(&["competitor", "double-bubble", "--csv", "--nodes", "64"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("curve,s,x,y,k\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 64);
}

#[test]
fn svg_and_network_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("bubble.svg");
    let net = dir.path().join("bubble.json");
    let out = elastnet(&[
        "competitor",
        "double-bubble",
        "--svg",
        svg.to_str().unwrap(),
        "--emit-network",
        net.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let figure = std::fs::read_to_string(&svg).unwrap();
    assert!(figure.starts_with("<?xml"));
    assert!(figure.contains("version=\"1.1\"") && figure.contains("viewBox="));
    assert_eq!(figure.matches("<polyline").count(), 3);

    let v = json(&["network", net.to_str().unwrap(), "--nodes", "2048"]);
    assert_eq!(v.pointer("/classification").unwrap(), "Theta");
    assert!((num(&v, "/energy/total") - 18.4059).abs() < 1e-3);
    assert_eq!(v.pointer("/theta_lower_bound_holds").unwrap(), true);
    for j in 0..2 {
        assert!(num(&v, &format!("/junction_residuals/{j}/scalar_sum")).abs() < 1e-3);
    }
}

#[test]
fn eight_network_is_not_degenerate_theta() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("eight.json");
    assert!(elastnet(&["eight", "--emit-network", net.to_str().unwrap()]).status.success());
    let v = json(&["network", net.to_str().unwrap()]);
    assert_eq!(v.pointer("/classification").unwrap(), "Other");
    assert_eq!(v.pointer("/relaxed_energy").unwrap(), "infinite");
}

fn write_circle(path: &Path, r: f64) {
    let pts: Vec<[f64; 2]> = (0..1000)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 1000.0;
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    let doc = serde_json::json!({ "closed": true, "points": pts });
    std::fs::write(path, doc.to_string()).unwrap();
}

#[test]
fn curve_file_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circle.json");
    write_circle(&path, 2.0);
    let v = json(&["curve", path.to_str().unwrap(), "--nodes", "1024"]);
    assert!((num(&v, "/energy/bending") - PI).abs() < 1e-4);
    assert!((num(&v, "/energy/total") - 5.0 * PI).abs() < 1e-4);
    assert!((num(&v, "/euler_lagrange_residual") - 0.375).abs() < 1e-2);
    assert_eq!(v.pointer("/gauss_bonnet/meets_two_pi").unwrap(), true);

    std::fs::write(&path, "{\"closed\": true}").unwrap();
    assert_eq!(elastnet(&["curve", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn angles_outside_recommended_range_warn() {
    let out = elastnet(&["competitor", "angles", "60", "140", "160", "--nodes", "128"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let quiet = elastnet(&["competitor", "angles", "120", "120", "120", "--nodes", "128"]);
    assert!(quiet.stderr.is_empty());
    assert_eq!(elastnet(&["competitor", "angles", "100", "100", "100"]).status.code(), Some(1));
}

#[test]
fn elliptic_values() {
    let v = json(&["elliptic", "K", "0.5"]);
    assert!((num(&v, "/value") - 1.854074677).abs() < 1e-9);
    let v = json(&["elliptic", "cn", "0.7", "0"]);
    assert!((num(&v, "/value") - 0.7f64.cos()).abs() < 1e-9);
    let v = json(&["elliptic", "am", "-0.3", "0"]);
    assert_eq!(num(&v, "/value"), -0.3);
}
