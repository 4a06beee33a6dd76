//! The ten-object worked example: embedded data, reference values,
//! and a recomputation that checks every intermediate quantity.

use serde::Serialize;

use crate::dataset::{read_csv, CsvOptions, MixedTable};
use crate::detector::{detect, FrodConfig};
use crate::entropy::{fuzzy_relative_entropy, leave_one_out_entropy, EntropyState};
use crate::error::Result;
use crate::fuzzy_relation::{attribute_relation, FuzzyRelation};
use crate::supervision::{attribute_classification_accuracy, class_indicators};

/// Three attributes (real, integer, categorical), five labeled and five
/// unlabeled objects.
pub const WORKED_EXAMPLE_CSV: &str = "\
c1,c2,c3,d
0.53,7,C,1
0.48,8,C,0
0.50,7,B,0
0.48,8,B,0
0.51,8,B,0
0.52,7,C,
0.48,9,A,
0.47,8,A,
0.53,9,A,
0.48,9,B,
";

pub const TOLERANCE: f64 = 1e-3;

/// The worked example as a normalized table.
pub fn worked_example_table() -> MixedTable {
    read_csv(WORKED_EXAMPLE_CSV.as_bytes(), &CsvOptions::new("d"))
        .expect("embedded example parses")
        .normalize()
}

/// Reference intermediate values of the worked example (delta = beta = 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceValues {
    pub radius_c1: f64,
    pub radius_c2: f64,
    pub labeled_matrices: [Vec<Vec<f64>>; 3],
    pub unlabeled_matrices: [Vec<Vec<f64>>; 3],
    pub gamma: [f64; 3],
    pub entropy_c1: f64,
    pub loo_entropy_c1_o6: f64,
    pub fre_c1_o6: f64,
    pub of_c1_o6: f64,
    pub of_c2_o6: f64,
    pub od: [f64; 5],
    pub threshold: f64,
    /// Object ids (0-based) predicted as outliers under `threshold`.
    pub outliers: Vec<usize>,
}

impl ReferenceValues {
    pub fn expected() -> Self {
        let rows = |r: &[[f64; 5]; 5]| r.iter().map(|x| x.to_vec()).collect::<Vec<_>>();
        ReferenceValues {
            radius_c1: 0.3467,
            radius_c2: 0.24,
            labeled_matrices: [
                rows(&[
                    [1.0, 0.0, 0.0, 0.0, 0.667],
                    [0.0, 1.0, 0.667, 1.0, 0.0],
                    [0.0, 0.667, 1.0, 0.667, 0.833],
                    [0.0, 1.0, 0.667, 1.0, 0.0],
                    [0.667, 0.0, 0.833, 0.0, 1.0],
                ]),
                rows(&[
                    [1.0, 0.0, 1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 1.0, 1.0],
                    [1.0, 0.0, 1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 1.0, 1.0],
                    [0.0, 1.0, 0.0, 1.0, 1.0],
                ]),
                rows(&[
                    [1.0, 1.0, 0.0, 0.0, 0.0],
                    [1.0, 1.0, 0.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 1.0, 1.0],
                    [0.0, 0.0, 1.0, 1.0, 1.0],
                    [0.0, 0.0, 1.0, 1.0, 1.0],
                ]),
            ],
            unlabeled_matrices: [
                rows(&[
                    [1.0, 0.0, 0.0, 0.833, 0.0],
                    [0.0, 1.0, 0.833, 0.0, 1.0],
                    [0.0, 0.833, 1.0, 0.0, 0.833],
                    [0.833, 0.0, 0.0, 1.0, 0.0],
                    [0.0, 1.0, 0.833, 0.0, 1.0],
                ]),
                rows(&[
                    [1.0, 0.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 1.0, 1.0],
                    [0.0, 0.0, 1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 1.0, 1.0],
                    [0.0, 1.0, 0.0, 1.0, 1.0],
                ]),
                rows(&[
                    [1.0, 0.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 1.0, 1.0, 0.0],
                    [0.0, 1.0, 1.0, 1.0, 0.0],
                    [0.0, 1.0, 1.0, 1.0, 0.0],
                    [0.0, 0.0, 0.0, 0.0, 1.0],
                ]),
            ],
            gamma: [0.914, 0.6, 0.6],
            entropy_c1: 1.088,
            loo_entropy_c1_o6: 0.895,
            fre_c1_o6: 1.023,
            of_c1_o6: 0.619,
            of_c2_o6: 0.3542,
            od: [0.670, 0.316, 0.467, 0.410, 0.446],
            threshold: 0.6,
            outliers: vec![5],
        }
    }
}

/// Recomputed counterparts of [`ReferenceValues`].
#[derive(Debug, Clone, Serialize)]
pub struct WorkedExample {
    pub radius_c1: f64,
    pub radius_c2: f64,
    pub labeled_relations: Vec<FuzzyRelation>,
    pub unlabeled_relations: Vec<FuzzyRelation>,
    pub gamma: Vec<f64>,
    pub entropy_c1: f64,
    pub loo_entropy_c1_o6: f64,
    pub fre_c1_o6: f64,
    pub of_c1_o6: f64,
    pub of_c2_o6: f64,
    pub od: Vec<f64>,
    pub outliers: Vec<usize>,
}

/// Runs every step of the pipeline on the embedded table.
pub fn compute_worked_example(delta: f64, beta: f64, threshold: f64) -> Result<WorkedExample> {
    let table = worked_example_table();
    let labeled = table.labeled_ids();
    let unlabeled = table.unlabeled_ids();
    let states: Vec<_> = labeled.iter().map(|&i| table.labels()[i]).collect();
    let (neg, pos) = class_indicators(&labeled, &states)?;

    let mut labeled_relations = Vec::new();
    let mut unlabeled_relations = Vec::new();
    let mut radii = Vec::new();
    let mut gamma = Vec::new();
    for a in 0..table.n_attributes() {
        let lr = attribute_relation(&table, a, &labeled, delta)?;
        gamma.push(attribute_classification_accuracy(&lr.relation, &neg, &pos, beta)?.gamma);
        radii.push(lr.radius);
        labeled_relations.push(lr.relation);
        unlabeled_relations.push(attribute_relation(&table, a, &unlabeled, delta)?.relation);
    }

    let c1 = EntropyState::new(unlabeled_relations[0].clone())?;
    let result = detect(
        &table,
        &labeled,
        &unlabeled,
        &FrodConfig::new(delta, beta).with_threshold(threshold),
    )?;
    let of = |attr: usize| result.per_attribute[attr].factors[0];

    Ok(WorkedExample {
        radius_c1: radii[0].unwrap_or(0.0),
        radius_c2: radii[1].unwrap_or(0.0),
        labeled_relations,
        unlabeled_relations,
        gamma,
        entropy_c1: c1.entropy(),
        loo_entropy_c1_o6: leave_one_out_entropy(&c1, 0)?,
        fre_c1_o6: fuzzy_relative_entropy(&c1, 0)?,
        of_c1_o6: of(0),
        of_c2_o6: of(1),
        od: result.scores.clone(),
        outliers: result.outliers(),
    })
}

/// One compared quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub passed: bool,
}

/// Compares a recomputation at `delta = beta = 1` against `reference`.
pub fn check_worked_example(reference: &ReferenceValues, tolerance: f64) -> Result<Vec<Check>> {
    let got = compute_worked_example(1.0, 1.0, reference.threshold)?;
    let mut checks = Vec::new();
    let mut push = |name: String, expected: f64, actual: f64| {
        checks.push(Check {
            passed: (expected - actual).abs() <= tolerance,
            name,
            expected,
            actual,
        });
    };
    push("r1".into(), reference.radius_c1, got.radius_c1);
    push("r2".into(), reference.radius_c2, got.radius_c2);
    for (prefix, expected, actual) in [
        ("M'", &reference.labeled_matrices, &got.labeled_relations),
        ("M", &reference.unlabeled_matrices, &got.unlabeled_relations),
    ] {
        for (a, (exp, rel)) in expected.iter().zip(actual).enumerate() {
            for (i, row) in exp.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    push(
                        format!("{prefix}_c{}[{},{}]", a + 1, i + 1, j + 1),
                        e,
                        rel.get(i, j),
                    );
                }
            }
        }
    }
    for (a, (&e, &g)) in reference.gamma.iter().zip(&got.gamma).enumerate() {
        push(format!("gamma_c{}", a + 1), e, g);
    }
    push("FE(c1)".into(), reference.entropy_c1, got.entropy_c1);
    push(
        "FE_not6(c1)".into(),
        reference.loo_entropy_c1_o6,
        got.loo_entropy_c1_o6,
    );
    push("FRE_c1(o6)".into(), reference.fre_c1_o6, got.fre_c1_o6);
    push("OF_c1(o6)".into(), reference.of_c1_o6, got.of_c1_o6);
    push("OF_c2(o6)".into(), reference.of_c2_o6, got.of_c2_o6);
    for (i, (&e, &g)) in reference.od.iter().zip(&got.od).enumerate() {
        push(format!("OD(o{})", i + 6), e, g);
    }
    checks.push(Check {
        name: format!("outlier set at theta={}", reference.threshold),
        expected: reference.outliers.len() as f64,
        actual: got.outliers.len() as f64,
        passed: got.outliers == reference.outliers,
    });
    Ok(checks)
}
