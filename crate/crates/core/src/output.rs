//! Score files: a per-object CSV and a JSON sidecar describing the run.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::MixedTable;
use crate::detector::{DetectionResult, FrodConfig};
use crate::error::Result;

/// Writes `object_id,od_score,prediction` rows for the unlabeled objects.
pub fn write_scores_csv<W: Write>(result: &DetectionResult, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["object_id", "od_score", "prediction"])?;
    for ((id, score), pred) in result
        .unlabeled
        .iter()
        .zip(&result.scores)
        .zip(&result.predictions)
    {
        out.write_record([
            id.to_string(),
            score.to_string(),
            if *pred { "1" } else { "0" }.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSummary {
    pub name: String,
    pub kind: crate::dataset::AttributeKind,
    pub gamma: f64,
}

/// Run metadata written next to the score CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub config: FrodConfig,
    pub threshold: f64,
    pub threshold_in_unit_interval: bool,
    pub threshold_source: String,
    pub n_labeled: usize,
    pub n_unlabeled: usize,
    pub attributes: Vec<AttributeSummary>,
    pub outliers: Vec<usize>,
}

impl Sidecar {
    pub fn new(table: &MixedTable, result: &DetectionResult) -> Self {
        Sidecar {
            config: result.config,
            threshold: result.threshold,
            threshold_in_unit_interval: result.threshold_in_unit_interval(),
            threshold_source: if result.config.threshold_override.is_some() {
                "override".into()
            } else {
                "max labeled normal".into()
            },
            n_labeled: result.labeled.len(),
            n_unlabeled: result.unlabeled.len(),
            attributes: result
                .per_attribute
                .iter()
                .map(|c| {
                    let attr = &table.attributes()[c.attribute];
                    AttributeSummary {
                        name: attr.name().to_string(),
                        kind: attr.kind(),
                        gamma: c.gamma,
                    }
                })
                .collect(),
            outliers: result.outliers(),
        }
    }
}

/// Sidecar location for a score file: the same path with `.json` appended.
pub fn sidecar_path(scores: &Path) -> PathBuf {
    let mut s = scores.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the score CSV and its sidecar; returns the sidecar path.
pub fn write_detection(
    path: &Path,
    table: &MixedTable,
    result: &DetectionResult,
) -> Result<PathBuf> {
    write_scores_csv(result, std::fs::File::create(path)?)?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(&Sidecar::new(table, result))?;
    std::fs::write(&side, json + "\n")?;
    Ok(side)
}
