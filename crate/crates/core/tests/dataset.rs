use frod::dataset::{load_csv, AttributeKind, CsvOptions, LabelState, Schema};
use frod::FrodError;

fn ionosphere() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/ionosphere.csv").to_string()
}

#[test]
fn bundled_ionosphere_has_expected_shape() {
    let table = load_csv(ionosphere(), &CsvOptions::new("label")).unwrap();
    assert_eq!(table.n_objects(), 351);
    assert_eq!(table.n_attributes(), 32);
    assert!(table
        .attributes()
        .iter()
        .all(|a| a.kind() == AttributeKind::Numerical));
    assert_eq!(table.ids_with(LabelState::Outlier).len(), 126);
    assert!(table.unlabeled_ids().is_empty());
    assert!(!table.is_normalized());
    assert!(table.normalize().is_normalized());
}

#[test]
fn schema_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("schema.txt");
    std::fs::write(&path, "# kinds\na3: numeric\na4:categorical\n\n").unwrap();
    let schema = Schema::from_file(&path).unwrap();
    assert_eq!(schema.kind_of("a3"), Some(AttributeKind::Numerical));
    assert_eq!(schema.kind_of("a4"), Some(AttributeKind::Nominal));
    let table = load_csv(ionosphere(), &CsvOptions::new("label").with_schema(schema)).unwrap();
    assert_eq!(table.attribute(1).unwrap().kind(), AttributeKind::Nominal);
}

#[test]
fn ragged_rows_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "x,y,label\n1,2,0\n3,1\n").unwrap();
    assert!(matches!(
        load_csv(&path, &CsvOptions::new("label")),
        Err(FrodError::Csv(_))
    ));
}
