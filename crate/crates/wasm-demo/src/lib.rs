//! Browser bindings for the `frod` detector.
//!
//! Every exported function returns a JSON string. The plain Rust functions in
//! [`api`] carry the logic and are what the native tests exercise; the
//! `#[wasm_bindgen]` wrappers only translate errors into JavaScript values.

use wasm_bindgen::prelude::*;

pub mod api {
    use serde::Serialize;

    use frod::dataset::{read_csv, Attribute, CsvOptions, LabelState, MixedTable};
    use frod::detector::{detect_table, outlier_factor, FrodConfig};
    use frod::entropy::{relative_entropy_or_default, EntropyState};
    use frod::fuzzy_relation::{fuzzy_radius, numerical_relation};
    use frod::golden::{check_worked_example, ReferenceValues, TOLERANCE, WORKED_EXAMPLE_CSV};
    use frod::DetectionResult;

    #[derive(Debug, Serialize)]
    struct AttributeReport {
        name: String,
        gamma: f64,
    }

    #[derive(Debug, Serialize)]
    struct ObjectReport {
        id: usize,
        score: f64,
        outlier: bool,
    }

    #[derive(Debug, Serialize)]
    struct DetectionReport {
        threshold: f64,
        threshold_in_unit_interval: bool,
        attributes: Vec<AttributeReport>,
        objects: Vec<ObjectReport>,
        labeled: Vec<ObjectReport>,
    }

    impl DetectionReport {
        fn new(table: &MixedTable, result: &DetectionResult) -> Self {
            let objects = |ids: &[usize], scores: &[f64], flags: &dyn Fn(usize) -> bool| {
                ids.iter()
                    .zip(scores)
                    .enumerate()
                    .map(|(p, (&id, &score))| ObjectReport {
                        id,
                        score,
                        outlier: flags(p),
                    })
                    .collect()
            };
            DetectionReport {
                threshold: result.threshold,
                threshold_in_unit_interval: result.threshold_in_unit_interval(),
                attributes: result
                    .per_attribute
                    .iter()
                    .map(|c| AttributeReport {
                        name: table.attributes()[c.attribute].name().to_string(),
                        gamma: c.gamma,
                    })
                    .collect(),
                objects: objects(&result.unlabeled, &result.scores, &|p| {
                    result.predictions[p]
                }),
                labeled: objects(&result.labeled, &result.labeled_scores, &|p| {
                    table.labels()[result.labeled[p]] == LabelState::Outlier
                }),
            }
        }
    }

    fn config(delta: f64, beta: f64, threshold: Option<f64>) -> FrodConfig {
        let mut c = FrodConfig::new(delta, beta);
        c.threshold_override = threshold;
        c
    }

    fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
        serde_json::to_string(value).map_err(|e| e.to_string())
    }

    #[derive(Debug, Serialize)]
    struct CheckReport {
        name: String,
        expected: f64,
        actual: f64,
        passed: bool,
    }

    #[derive(Debug, Serialize)]
    struct ExampleReport {
        csv: &'static str,
        detection: DetectionReport,
        checks: Vec<CheckReport>,
    }

    /// Scores the built-in ten-object example. At `delta = beta = 1` and
    /// `threshold = 0.6` the response also lists the reference comparison.
    pub fn worked_example(delta: f64, beta: f64, threshold: Option<f64>) -> Result<String, String> {
        let table = frod::golden::worked_example_table();
        let result =
            detect_table(&table, &config(delta, beta, threshold)).map_err(|e| e.to_string())?;
        let reference = ReferenceValues::expected();
        let checks = if delta == 1.0 && beta == 1.0 && threshold == Some(reference.threshold) {
            check_worked_example(&reference, TOLERANCE)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|c| CheckReport {
                    name: c.name,
                    expected: c.expected,
                    actual: c.actual,
                    passed: c.passed,
                })
                .collect()
        } else {
            Vec::new()
        };
        to_json(&ExampleReport {
            csv: WORKED_EXAMPLE_CSV,
            detection: DetectionReport::new(&table, &result),
            checks,
        })
    }

    /// Scores the unlabeled rows of a CSV (labels 0, 1 or empty).
    pub fn detect_csv(
        text: &str,
        label_col: &str,
        delta: f64,
        beta: f64,
        threshold: Option<f64>,
    ) -> Result<String, String> {
        let table = read_csv(text.as_bytes(), &CsvOptions::new(label_col))
            .map_err(|e| e.to_string())?
            .normalize();
        let result =
            detect_table(&table, &config(delta, beta, threshold)).map_err(|e| e.to_string())?;
        to_json(&DetectionReport::new(&table, &result))
    }

    #[derive(Debug, Serialize)]
    struct ProfilePoint {
        value: f64,
        normalized: f64,
        cardinality: f64,
        relative_entropy: f64,
        outlier_factor: f64,
    }

    #[derive(Debug, Serialize)]
    struct Profile {
        radius: f64,
        entropy: f64,
        points: Vec<ProfilePoint>,
    }

    /// Relative entropy and outlier factor of every point of a single
    /// numerical attribute, treating all points as one unlabeled universe.
    pub fn fre_profile(values: &[f64], delta: f64) -> Result<String, String> {
        let n = values.len();
        let table = MixedTable::new(
            vec![Attribute::numerical("x", values.to_vec())],
            vec![LabelState::Unlabeled; n],
        )
        .map_err(|e| e.to_string())?
        .normalize();
        let normalized = table.attributes()[0]
            .normalized()
            .unwrap_or_default()
            .to_vec();
        let radius = fuzzy_radius(&normalized, delta).map_err(|e| e.to_string())?;
        let state = EntropyState::new(numerical_relation((0..n).collect(), &normalized, radius))
            .map_err(|e| e.to_string())?;
        let points = (0..n)
            .map(|i| {
                Ok(ProfilePoint {
                    value: values[i],
                    normalized: normalized[i],
                    cardinality: state.cardinalities()[i],
                    relative_entropy: relative_entropy_or_default(&state, i)?,
                    outlier_factor: outlier_factor(&state, i)?,
                })
            })
            .collect::<frod::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        to_json(&Profile {
            radius,
            entropy: state.entropy(),
            points,
        })
    }
}

fn js_result(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = workedExample)]
pub fn worked_example(delta: f64, beta: f64, threshold: Option<f64>) -> Result<String, JsValue> {
    js_result(api::worked_example(delta, beta, threshold))
}

#[wasm_bindgen(js_name = detectCsv)]
pub fn detect_csv(
    text: &str,
    label_col: &str,
    delta: f64,
    beta: f64,
    threshold: Option<f64>,
) -> Result<String, JsValue> {
    js_result(api::detect_csv(text, label_col, delta, beta, threshold))
}

#[wasm_bindgen(js_name = freProfile)]
pub fn fre_profile(values: &[f64], delta: f64) -> Result<String, JsValue> {
    js_result(api::fre_profile(values, delta))
}
