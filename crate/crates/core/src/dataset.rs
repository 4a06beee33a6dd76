//! Mixed-attribute object tables: loading, typing, min-max normalization and
//! stratified labeled/unlabeled splits.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FrodError, Result};

/// Whether an attribute is compared by numeric difference or by equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Numerical,
    Nominal,
}

impl AttributeKind {
    fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "numerical" | "numeric" | "real" | "integer" | "int" | "float" => {
                Some(AttributeKind::Numerical)
            }
            "nominal" | "categorical" | "category" | "string" => Some(AttributeKind::Nominal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Column {
    Numerical {
        raw: Vec<f64>,
        normalized: Option<Vec<f64>>,
    },
    Nominal {
        raw: Vec<String>,
        /// Dense category codes in first-appearance order.
        codes: Vec<u32>,
    },
}

/// One conditional attribute (table column).
#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    name: String,
    column: Column,
}

impl Attribute {
    pub fn numerical(name: impl Into<String>, values: Vec<f64>) -> Self {
        Attribute {
            name: name.into(),
            column: Column::Numerical {
                raw: values,
                normalized: None,
            },
        }
    }

    pub fn nominal<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Self {
        let raw: Vec<String> = values.into_iter().map(Into::into).collect();
        let mut dictionary: HashMap<&str, u32> = HashMap::new();
        let codes = raw
            .iter()
            .map(|v| {
                let next = dictionary.len() as u32;
                *dictionary.entry(v.as_str()).or_insert(next)
            })
            .collect();
        Attribute {
            name: name.into(),
            column: Column::Nominal { raw, codes },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> AttributeKind {
        match self.column {
            Column::Numerical { .. } => AttributeKind::Numerical,
            Column::Nominal { .. } => AttributeKind::Nominal,
        }
    }

    pub fn len(&self) -> usize {
        match &self.column {
            Column::Numerical { raw, .. } => raw.len(),
            Column::Nominal { raw, .. } => raw.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Raw numerical values, `None` for nominal attributes.
    pub fn raw_numbers(&self) -> Option<&[f64]> {
        match &self.column {
            Column::Numerical { raw, .. } => Some(raw),
            Column::Nominal { .. } => None,
        }
    }

    /// Raw nominal values, `None` for numerical attributes.
    pub fn raw_categories(&self) -> Option<&[String]> {
        match &self.column {
            Column::Nominal { raw, .. } => Some(raw),
            Column::Numerical { .. } => None,
        }
    }

    /// Min-max scaled values; present only for numerical attributes after normalization.
    pub fn normalized(&self) -> Option<&[f64]> {
        match &self.column {
            Column::Numerical { normalized, .. } => normalized.as_deref(),
            Column::Nominal { .. } => None,
        }
    }

    /// Category codes; equal codes mean equal raw values.
    pub fn codes(&self) -> Option<&[u32]> {
        match &self.column {
            Column::Nominal { codes, .. } => Some(codes),
            Column::Numerical { .. } => None,
        }
    }

    fn normalize(&mut self) {
        if let Column::Numerical { raw, normalized } = &mut self.column {
            *normalized = Some(min_max(raw));
        }
    }
}

/// Min-max scales into [0, 1]. A constant column maps to all zeros.
pub fn min_max(values: &[f64]) -> Vec<f64> {
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = max - min;
    if span <= 0.0 {
        return vec![0.0; values.len()];
    }
    values
        .iter()
        .map(|&v| ((v - min) / span).clamp(0.0, 1.0))
        .collect()
}

/// Label state of one object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelState {
    Normal,
    Outlier,
    Unlabeled,
}

/// Column-typed object table with per-object label state.
///
/// Object ids are the row indices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTable {
    attributes: Vec<Attribute>,
    labels: Vec<LabelState>,
}

impl MixedTable {
    pub fn new(attributes: Vec<Attribute>, labels: Vec<LabelState>) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(FrodError::Schema(format!(
                "a table needs at least 2 objects, got {n}"
            )));
        }
        if attributes.is_empty() {
            return Err(FrodError::Schema(
                "a table needs at least one attribute".into(),
            ));
        }
        for attr in &attributes {
            if attr.len() != n {
                return Err(FrodError::Schema(format!(
                    "column `{}` has {} values, expected {n}",
                    attr.name,
                    attr.len()
                )));
            }
            if let Some(raw) = attr.raw_numbers() {
                if let Some(bad) = raw.iter().position(|v| !v.is_finite()) {
                    return Err(FrodError::Schema(format!(
                        "column `{}` has a non-finite value at row {bad}",
                        attr.name
                    )));
                }
            }
        }
        Ok(MixedTable { attributes, labels })
    }

    pub fn n_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> Option<&Attribute> {
        self.attributes.get(index)
    }

    pub fn labels(&self) -> &[LabelState] {
        &self.labels
    }

    pub fn label(&self, id: usize) -> Option<LabelState> {
        self.labels.get(id).copied()
    }

    /// Object ids carrying the given label, ascending.
    pub fn ids_with(&self, state: LabelState) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == state)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn labeled_ids(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != LabelState::Unlabeled)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn unlabeled_ids(&self) -> Vec<usize> {
        self.ids_with(LabelState::Unlabeled)
    }

    /// True when every numerical attribute carries normalized values.
    pub fn is_normalized(&self) -> bool {
        self.attributes
            .iter()
            .all(|a| a.kind() == AttributeKind::Nominal || a.normalized().is_some())
    }

    /// Min-max normalizes every numerical column over all objects jointly.
    pub fn normalize(&self) -> MixedTable {
        let mut out = self.clone();
        for attr in &mut out.attributes {
            attr.normalize();
        }
        out
    }

    /// Replaces the label vector, keeping the attribute data.
    pub fn with_labels(&self, labels: Vec<LabelState>) -> Result<MixedTable> {
        if labels.len() != self.n_objects() {
            return Err(FrodError::Label(format!(
                "expected {} labels, got {}",
                self.n_objects(),
                labels.len()
            )));
        }
        Ok(MixedTable {
            attributes: self.attributes.clone(),
            labels,
        })
    }

    /// Ground truth as booleans (`true` = outlier). Fails if any object is unlabeled.
    pub fn ground_truth(&self) -> Result<Vec<bool>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| match l {
                LabelState::Normal => Ok(false),
                LabelState::Outlier => Ok(true),
                LabelState::Unlabeled => Err(FrodError::Label(format!(
                    "object {i} has no ground-truth label"
                ))),
            })
            .collect()
    }
}

/// Free-function form of [`MixedTable::normalize`].
pub fn normalize(table: &MixedTable) -> MixedTable {
    table.normalize()
}

/// Column kinds declared up front, one `name:kind` entry per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    entries: Vec<(String, AttributeKind)>,
}

impl Schema {
    pub fn parse(text: &str) -> Result<Schema> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, kind) = line.rsplit_once(':').ok_or_else(|| {
                FrodError::Schema(format!("line {}: expected `name:kind`", lineno + 1))
            })?;
            let kind = AttributeKind::parse(kind).ok_or_else(|| {
                FrodError::Schema(format!(
                    "line {}: unknown kind `{}`",
                    lineno + 1,
                    kind.trim()
                ))
            })?;
            entries.push((name.trim().to_string(), kind));
        }
        Ok(Schema { entries })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Schema> {
        Schema::parse(&std::fs::read_to_string(path)?)
    }

    pub fn with(mut self, name: impl Into<String>, kind: AttributeKind) -> Self {
        self.entries.push((name.into(), kind));
        self
    }

    pub fn kind_of(&self, name: &str) -> Option<AttributeKind> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, k)| k)
    }
}

/// Label tokens recognised in the label column. Matching trims whitespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAliases {
    pub normal: Vec<String>,
    pub outlier: Vec<String>,
    pub unlabeled: Vec<String>,
}

impl Default for LabelAliases {
    fn default() -> Self {
        LabelAliases {
            normal: vec!["0".into()],
            outlier: vec!["1".into()],
            unlabeled: vec!["".into()],
        }
    }
}

impl LabelAliases {
    pub fn parse(&self, token: &str) -> Option<LabelState> {
        let t = token.trim();
        let hit = |set: &[String]| set.iter().any(|s| s.trim() == t);
        if hit(&self.normal) {
            Some(LabelState::Normal)
        } else if hit(&self.outlier) {
            Some(LabelState::Outlier)
        } else if hit(&self.unlabeled) {
            Some(LabelState::Unlabeled)
        } else {
            None
        }
    }
}

/// Options for CSV ingestion.
#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub label_column: String,
    pub schema: Option<Schema>,
    pub aliases: LabelAliases,
}

impl CsvOptions {
    pub fn new(label_column: impl Into<String>) -> Self {
        CsvOptions {
            label_column: label_column.into(),
            schema: None,
            aliases: LabelAliases::default(),
        }
    }

    pub fn with_schema(mut self, schema: Schema) -> Self {
        self.schema = Some(schema);
        self
    }

    pub fn with_aliases(mut self, aliases: LabelAliases) -> Self {
        self.aliases = aliases;
        self
    }
}

/// Loads a headered CSV file into a table. Numerical columns are not yet normalized.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<MixedTable> {
    read_csv(File::open(path)?, options)
}

pub fn read_csv<R: Read>(reader: R, options: &CsvOptions) -> Result<MixedTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::Fields)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let label_idx = headers
        .iter()
        .position(|h| *h == options.label_column)
        .ok_or_else(|| {
            FrodError::Schema(format!("label column `{}` not found", options.label_column))
        })?;

    if let Some(schema) = &options.schema {
        for (name, _) in &schema.entries {
            if !headers.contains(name) {
                return Err(FrodError::Schema(format!(
                    "schema names unknown column `{name}`"
                )));
            }
        }
    }

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    let mut labels = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (col, value) in record.iter().enumerate() {
            if col == label_idx {
                let label = options.aliases.parse(value).ok_or_else(|| {
                    FrodError::Label(format!("row {}: unrecognised label `{value}`", row + 1))
                })?;
                labels.push(label);
            } else {
                if value.is_empty() {
                    return Err(FrodError::Schema(format!(
                        "row {}: missing value in column `{}`",
                        row + 1,
                        headers[col]
                    )));
                }
                cells[col].push(value.to_string());
            }
        }
    }

    let mut attributes = Vec::with_capacity(headers.len() - 1);
    for (col, (name, values)) in headers.iter().zip(cells).enumerate() {
        if col == label_idx {
            continue;
        }
        let declared = options.schema.as_ref().and_then(|s| s.kind_of(name));
        attributes.push(build_attribute(name, values, declared)?);
    }
    MixedTable::new(attributes, labels)
}

fn parse_finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn build_attribute(
    name: &str,
    values: Vec<String>,
    declared: Option<AttributeKind>,
) -> Result<Attribute> {
    let parsed: Option<Vec<f64>> = values.iter().map(|v| parse_finite(v)).collect();
    match (declared, parsed) {
        (Some(AttributeKind::Nominal), _) => Ok(Attribute::nominal(name, values)),
        (Some(AttributeKind::Numerical), Some(nums)) | (None, Some(nums)) => {
            Ok(Attribute::numerical(name, nums))
        }
        (Some(AttributeKind::Numerical), None) => {
            let bad = values.iter().find(|v| parse_finite(v).is_none()).unwrap();
            Err(FrodError::Schema(format!(
                "column `{name}` is declared numerical but contains `{bad}`"
            )))
        }
        (None, None) => Ok(Attribute::nominal(name, values)),
    }
}

/// Disjoint labeled/unlabeled partition of the object ids, each ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub labeled: Vec<usize>,
    pub unlabeled: Vec<usize>,
}

/// Seeded stratified split preserving the outlier proportion in the labeled part.
///
/// The labeled set holds `floor(n * fraction)` objects, of which
/// `round(n_outliers * fraction)` are outliers.
pub fn stratified_split(table: &MixedTable, labeled_fraction: f64, seed: u64) -> Result<Split> {
    let truth = table.ground_truth()?;
    stratified_split_truth(&truth, labeled_fraction, seed)
}

pub fn stratified_split_truth(truth: &[bool], labeled_fraction: f64, seed: u64) -> Result<Split> {
    if !(labeled_fraction > 0.0 && labeled_fraction < 1.0) {
        return Err(FrodError::Param(format!(
            "labeled fraction must lie in (0, 1), got {labeled_fraction}"
        )));
    }
    let n = truth.len();
    let mut outliers: Vec<usize> = (0..n).filter(|&i| truth[i]).collect();
    let mut normals: Vec<usize> = (0..n).filter(|&i| !truth[i]).collect();

    // small epsilon so that e.g. 1000 * 0.1 is not floored to 99
    let total = (n as f64 * labeled_fraction + 1e-9).floor() as usize;
    let n_out = (outliers.len() as f64 * labeled_fraction).round() as usize;
    if n_out == 0 {
        return Err(FrodError::Split(format!(
            "fraction {labeled_fraction} selects no outliers out of {}",
            outliers.len()
        )));
    }
    if total <= n_out || total - n_out > normals.len() || n_out > outliers.len() {
        return Err(FrodError::Split(format!(
            "fraction {labeled_fraction} of {n} objects cannot hold both classes"
        )));
    }
    let n_norm = total - n_out;
    if total >= n {
        return Err(FrodError::Split("no unlabeled objects would remain".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    outliers.shuffle(&mut rng);
    normals.shuffle(&mut rng);

    let mut in_labeled = vec![false; n];
    for &i in outliers[..n_out].iter().chain(&normals[..n_norm]) {
        in_labeled[i] = true;
    }
    let (labeled, unlabeled): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| in_labeled[i]);
    Ok(Split { labeled, unlabeled })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = "c1,c2,c3,d\n\
        0.53,7,C,1\n0.48,8,C,0\n0.50,7,B,0\n0.48,8,B,0\n0.51,8,B,0\n\
        0.52,7,C,\n0.48,9,A,\n0.47,8,A,\n0.53,9,A,\n0.48,9,B,\n";

    #[test]
    fn loads_worked_example() {
        let t = read_csv(TABLE1.as_bytes(), &CsvOptions::new("d")).unwrap();
        let kinds: Vec<_> = t.attributes().iter().map(Attribute::kind).collect();
        assert_eq!(
            kinds,
            [
                AttributeKind::Numerical,
                AttributeKind::Numerical,
                AttributeKind::Nominal
            ]
        );
        assert_eq!(t.ids_with(LabelState::Normal).len(), 4);
        assert_eq!(t.ids_with(LabelState::Outlier).len(), 1);
        assert_eq!(t.unlabeled_ids(), vec![5, 6, 7, 8, 9]);
    }

    #[test]
    fn one_bad_token_makes_column_nominal() {
        let csv = "a,b,y\n1,2,0\n3,x,1\n";
        let t = read_csv(csv.as_bytes(), &CsvOptions::new("y")).unwrap();
        assert_eq!(t.attribute(0).unwrap().kind(), AttributeKind::Numerical);
        assert_eq!(t.attribute(1).unwrap().kind(), AttributeKind::Nominal);
    }

    #[test]
    fn schema_conflict_is_an_error() {
        let csv = "a,y\n1,0\nfoo,1\n";
        let opts = CsvOptions::new("y").with_schema(Schema::parse("a:numerical").unwrap());
        assert!(matches!(
            read_csv(csv.as_bytes(), &opts),
            Err(FrodError::Schema(_))
        ));
    }

    #[test]
    fn schema_can_force_nominal() {
        let csv = "a,y\n1,0\n2,1\n";
        let opts = CsvOptions::new("y").with_schema(Schema::parse("a:nominal\n").unwrap());
        let t = read_csv(csv.as_bytes(), &opts).unwrap();
        assert_eq!(t.attribute(0).unwrap().kind(), AttributeKind::Nominal);
    }

    #[test]
    fn bad_label_and_missing_cell() {
        let csv = "a,y\n1,0\n2,maybe\n";
        assert!(matches!(
            read_csv(csv.as_bytes(), &CsvOptions::new("y")),
            Err(FrodError::Label(_))
        ));
        let csv = "a,b,y\n1,,0\n2,3,1\n";
        assert!(matches!(
            read_csv(csv.as_bytes(), &CsvOptions::new("y")),
            Err(FrodError::Schema(_))
        ));
    }

    #[test]
    fn custom_aliases() {
        let csv = "a,y\n1,normal\n2,anomaly\n3,?\n";
        let aliases = LabelAliases {
            normal: vec!["normal".into()],
            outlier: vec!["anomaly".into()],
            unlabeled: vec!["?".into()],
        };
        let t = read_csv(csv.as_bytes(), &CsvOptions::new("y").with_aliases(aliases)).unwrap();
        assert_eq!(
            t.labels(),
            &[
                LabelState::Normal,
                LabelState::Outlier,
                LabelState::Unlabeled
            ]
        );
    }

    #[test]
    fn normalizes_globally() {
        let t = read_csv(TABLE1.as_bytes(), &CsvOptions::new("d"))
            .unwrap()
            .normalize();
        let c1 = t.attribute(0).unwrap().normalized().unwrap();
        assert!((c1[0] - 1.0).abs() < 1e-12);
        assert!((c1[1] - 0.1667).abs() < 1e-4);
        assert!((c1[5] - 0.8333).abs() < 1e-4);
        assert!(t.attribute(2).unwrap().normalized().is_none());
        assert_eq!(t.normalize(), t);
    }

    #[test]
    fn constant_and_unit_columns() {
        assert_eq!(min_max(&[3.0, 3.0, 3.0]), vec![0.0; 3]);
        assert_eq!(min_max(&[0.0, 1.0, 1.0, 0.0]), vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn split_proportions() {
        let truth: Vec<bool> = (0..1000).map(|i| i % 10 == 0).collect();
        let s = stratified_split_truth(&truth, 0.1, 7).unwrap();
        assert_eq!(s.labeled.len(), 100);
        assert_eq!(s.labeled.iter().filter(|&&i| truth[i]).count(), 10);
        assert_eq!(s, stratified_split_truth(&truth, 0.1, 7).unwrap());

        let truth: Vec<bool> = (0..452).map(|i| i < 66).collect();
        let s = stratified_split_truth(&truth, 0.01, 3).unwrap();
        assert_eq!(s.labeled.len(), 4);
        assert_eq!(s.labeled.iter().filter(|&&i| truth[i]).count(), 1);
        assert_eq!(s.labeled.len() + s.unlabeled.len(), 452);
    }

    #[test]
    fn split_without_outliers_fails() {
        let truth: Vec<bool> = (0..100).map(|i| i == 0).collect();
        assert!(matches!(
            stratified_split_truth(&truth, 0.1, 1),
            Err(FrodError::Split(_))
        ));
    }
}
