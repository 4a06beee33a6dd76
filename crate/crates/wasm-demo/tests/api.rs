use frod_wasm_demo::api::{detect_csv, fre_profile, worked_example};
use serde_json::Value;

fn parse(json: Result<String, String>) -> Value {
    serde_json::from_str(&json.unwrap()).unwrap()
}

#[test]
fn worked_example_reproduces_reference() {
    let v = parse(worked_example(1.0, 1.0, Some(0.6)));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 166);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let objects = v["detection"]["objects"].as_array().unwrap();
    let flagged: Vec<u64> = objects
        .iter()
        .filter(|o| o["outlier"] == true)
        .map(|o| o["id"].as_u64().unwrap())
        .collect();
    assert_eq!(flagged, vec![5]);
    assert!((objects[0]["score"].as_f64().unwrap() - 0.670).abs() < 1e-3);
}

#[test]
fn worked_example_with_other_parameters_skips_checks() {
    let v = parse(worked_example(0.6, 10.0, None));
    assert!(v["checks"].as_array().unwrap().is_empty());
    assert_eq!(v["detection"]["objects"].as_array().unwrap().len(), 5);
    assert_eq!(v["detection"]["labeled"].as_array().unwrap().len(), 5);
}

#[test]
fn csv_detection_reports_attributes_and_scores() {
    let v = parse(detect_csv(
        frod::golden::WORKED_EXAMPLE_CSV,
        "d",
        1.0,
        1.0,
        Some(0.6),
    ));
    let names: Vec<&str> = v["attributes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, vec!["c1", "c2", "c3"]);
    assert_eq!(v["threshold"], 0.6);
}

#[test]
fn csv_errors_are_messages() {
    let err = detect_csv("x,label\n1,0\n2,0\n3,\n", "label", 1.0, 1.0, None).unwrap_err();
    assert!(!err.is_empty());
    assert!(detect_csv("x\n1\n2\n", "label", 1.0, 1.0, None).is_err());
}

#[test]
fn profile_ranks_far_point_lowest() {
    let v = parse(fre_profile(&[0.0, 0.05, 0.1, 0.08, 0.02, 1.0], 1.0));
    let points = v["points"].as_array().unwrap();
    let fre: Vec<f64> = points
        .iter()
        .map(|p| p["relative_entropy"].as_f64().unwrap())
        .collect();
    assert!(fre[..5].iter().all(|&f| f > fre[5]));
    assert!(v["radius"].as_f64().unwrap() > 0.0);
}

#[test]
fn profile_of_constant_values_is_uniform() {
    let v = parse(fre_profile(&[3.0, 3.0, 3.0], 1.0));
    let fre: Vec<f64> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["relative_entropy"].as_f64().unwrap())
        .collect();
    assert!(fre.iter().all(|&f| (f - fre[0]).abs() < 1e-15));
}
