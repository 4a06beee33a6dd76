//! Outlier factors, outlier degrees, adaptive thresholding and the full
//! detection pipeline.
//!
//! Per attribute: the labeled relation yields the two class accuracies behind
//! `gamma`, the unlabeled relation yields an entropy state and one outlier
//! factor per unlabeled object. Attributes are processed independently (in
//! parallel when the `parallel` feature is on); the final reduction into
//! outlier degrees runs sequentially in attribute order.

use serde::{Deserialize, Serialize};

use crate::dataset::{LabelState, MixedTable};
use crate::entropy::{appended_relative_entropy, relative_entropy_or_default, EntropyState};
use crate::error::{FrodError, Result};
use crate::fuzzy_relation::attribute_relation;
use crate::supervision::{check_beta, class_accuracies, class_indicators, ClassAccuracies};

pub const DEFAULT_DELTA: f64 = 1.0;
pub const DEFAULT_BETA: f64 = 1.0;

/// How labeled objects are scored so the threshold can be derived from the normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabeledScoring {
    /// Each labeled object is placed, on its own, into the unlabeled universe
    /// (reusing the unlabeled radius) and its relative entropy is evaluated there.
    #[default]
    AppendToUnlabeled,
    /// Labeled objects are scored within the labeled universe itself.
    LabeledUniverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrodConfig {
    /// Fuzzy radius multiplier.
    pub delta: f64,
    /// Weight of the outlier-class accuracy inside `gamma`.
    pub beta: f64,
    pub threshold_override: Option<f64>,
    #[serde(default)]
    pub labeled_scoring: LabeledScoring,
}

impl Default for FrodConfig {
    fn default() -> Self {
        FrodConfig {
            delta: DEFAULT_DELTA,
            beta: DEFAULT_BETA,
            threshold_override: None,
            labeled_scoring: LabeledScoring::default(),
        }
    }
}

impl FrodConfig {
    pub fn new(delta: f64, beta: f64) -> Self {
        FrodConfig {
            delta,
            beta,
            ..FrodConfig::default()
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold_override = Some(threshold);
        self
    }

    pub fn with_labeled_scoring(mut self, scoring: LabeledScoring) -> Self {
        self.labeled_scoring = scoring;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(FrodError::Param(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        check_beta(self.beta)?;
        if let Some(t) = self.threshold_override {
            if !t.is_finite() {
                return Err(FrodError::Param(format!(
                    "threshold must be finite, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// `sqrt(card_i / k) * FRE(i)`, using the zero-entropy convention for FRE.
pub fn outlier_factor(state: &EntropyState, i: usize) -> Result<f64> {
    let fre = relative_entropy_or_default(state, i)?;
    Ok(weighted_factor(state.cardinalities()[i], state.len(), fre))
}

fn weighted_factor(cardinality: f64, k: usize, fre: f64) -> f64 {
    (cardinality / k as f64).sqrt() * fre
}

/// `1 - (1/m) * sum_k gamma_k * OF_k`, summed in attribute order.
pub fn outlier_degree(gammas: &[f64], factors: &[f64]) -> Result<f64> {
    if gammas.len() != factors.len() {
        return Err(FrodError::AttributeMismatch(format!(
            "{} weights but {} factors",
            gammas.len(),
            factors.len()
        )));
    }
    if gammas.is_empty() {
        return Err(FrodError::AttributeMismatch("no attributes".into()));
    }
    let s: f64 = gammas.iter().zip(factors).map(|(g, f)| g * f).sum();
    Ok(1.0 - s / gammas.len() as f64)
}

/// Greatest outlier degree among labeled normal objects.
pub fn adaptive_threshold(normal_scores: &[f64]) -> Result<f64> {
    normal_scores
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or(FrodError::EmptyNormals)
}

/// Everything one attribute contributes, independent of `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeModel {
    pub attribute: usize,
    pub accuracies: ClassAccuracies,
    /// Outlier factor of each unlabeled object, in unlabeled-id order.
    pub unlabeled_factors: Vec<f64>,
    /// Outlier factor of each labeled object, in labeled-id order.
    pub labeled_factors: Vec<f64>,
}

/// Per-attribute models for one split and one `delta`. Scoring for any `beta`
/// is then a cheap recombination.
#[derive(Debug, Clone)]
pub struct FittedDetector {
    labeled: Vec<usize>,
    labeled_states: Vec<LabelState>,
    unlabeled: Vec<usize>,
    delta: f64,
    scoring: LabeledScoring,
    models: Vec<AttributeModel>,
}

impl FittedDetector {
    pub fn fit(
        table: &MixedTable,
        labeled: &[usize],
        unlabeled: &[usize],
        delta: f64,
        scoring: LabeledScoring,
    ) -> Result<Self> {
        FrodConfig::new(delta, DEFAULT_BETA).validate()?;
        validate_split(table, labeled, unlabeled)?;
        if !table.is_normalized() {
            return Err(FrodError::NotNormalized(
                "table must be normalized before detection".into(),
            ));
        }
        let labeled_states: Vec<LabelState> = labeled.iter().map(|&i| table.labels()[i]).collect();
        // fails early on a single-class labeled set
        class_indicators(labeled, &labeled_states)?;

        let fit_one = |a: usize| {
            fit_attribute(
                table,
                a,
                labeled,
                &labeled_states,
                unlabeled,
                delta,
                scoring,
            )
        };
        let models = map_attributes(table.n_attributes(), fit_one)?;

        Ok(FittedDetector {
            labeled: labeled.to_vec(),
            labeled_states,
            unlabeled: unlabeled.to_vec(),
            delta,
            scoring,
            models,
        })
    }

    pub fn models(&self) -> &[AttributeModel] {
        &self.models
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn labeled(&self) -> &[usize] {
        &self.labeled
    }

    pub fn unlabeled(&self) -> &[usize] {
        &self.unlabeled
    }

    pub fn gammas(&self, beta: f64) -> Vec<f64> {
        self.models
            .iter()
            .map(|m| m.accuracies.gamma(beta))
            .collect()
    }

    /// Outlier degrees of the unlabeled and of the labeled objects.
    pub fn scores(&self, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        check_beta(beta)?;
        let gammas = self.gammas(beta);
        let degrees = |n: usize, pick: &dyn Fn(&AttributeModel) -> &[f64]| -> Result<Vec<f64>> {
            let mut factors = vec![0.0; self.models.len()];
            (0..n)
                .map(|i| {
                    for (f, m) in factors.iter_mut().zip(&self.models) {
                        *f = pick(m)[i];
                    }
                    outlier_degree(&gammas, &factors)
                })
                .collect()
        };
        let unlabeled = degrees(self.unlabeled.len(), &|m| &m.unlabeled_factors)?;
        let labeled = degrees(self.labeled.len(), &|m| &m.labeled_factors)?;
        Ok((unlabeled, labeled))
    }

    pub fn result(&self, beta: f64, threshold_override: Option<f64>) -> Result<DetectionResult> {
        let (scores, labeled_scores) = self.scores(beta)?;
        let normals: Vec<f64> = labeled_scores
            .iter()
            .zip(&self.labeled_states)
            .filter(|(_, &l)| l == LabelState::Normal)
            .map(|(&s, _)| s)
            .collect();
        let threshold = match threshold_override {
            Some(t) => t,
            None => adaptive_threshold(&normals)?,
        };
        let predictions = scores.iter().map(|&s| s > threshold).collect();
        let gammas = self.gammas(beta);
        let per_attribute = self
            .models
            .iter()
            .zip(gammas)
            .map(|(m, gamma)| AttributeContribution {
                attribute: m.attribute,
                gamma,
                factors: m.unlabeled_factors.clone(),
            })
            .collect();
        Ok(DetectionResult {
            unlabeled: self.unlabeled.clone(),
            scores,
            threshold,
            predictions,
            labeled: self.labeled.clone(),
            labeled_scores,
            per_attribute,
            config: FrodConfig {
                delta: self.delta,
                beta,
                threshold_override,
                labeled_scoring: self.scoring,
            },
        })
    }
}

#[cfg(feature = "parallel")]
fn map_attributes<T, F>(m: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    use rayon::prelude::*;
    (0..m).into_par_iter().map(&f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_attributes<T, F>(m: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..m).map(f).collect()
}

fn validate_split(table: &MixedTable, labeled: &[usize], unlabeled: &[usize]) -> Result<()> {
    let n = table.n_objects();
    let mut seen = vec![false; n];
    for &i in labeled.iter().chain(unlabeled) {
        if i >= n {
            return Err(FrodError::Index { index: i, len: n });
        }
        if seen[i] {
            return Err(FrodError::Param(format!(
                "object {i} appears twice in the labeled/unlabeled split"
            )));
        }
        seen[i] = true;
    }
    if unlabeled.len() < 2 {
        return Err(FrodError::Param(format!(
            "need at least 2 unlabeled objects, got {}",
            unlabeled.len()
        )));
    }
    Ok(())
}

fn fit_attribute(
    table: &MixedTable,
    attribute: usize,
    labeled: &[usize],
    labeled_states: &[LabelState],
    unlabeled: &[usize],
    delta: f64,
    scoring: LabeledScoring,
) -> Result<AttributeModel> {
    let labeled_rel = attribute_relation(table, attribute, labeled, delta)?;
    let (neg, pos) = class_indicators(labeled, labeled_states)?;
    let accuracies = class_accuracies(&labeled_rel.relation, &neg, &pos)?;

    let unlabeled_rel = attribute_relation(table, attribute, unlabeled, delta)?;
    let state = EntropyState::new(unlabeled_rel.relation.clone())?;
    let unlabeled_factors = (0..state.len())
        .map(|i| outlier_factor(&state, i))
        .collect::<Result<Vec<_>>>()?;

    let labeled_factors = match scoring {
        LabeledScoring::AppendToUnlabeled => labeled
            .iter()
            .map(|&t| {
                let memberships = unlabeled_rel.memberships_of(table, t)?;
                let (fre, card) = appended_relative_entropy(&state, &memberships)?;
                Ok(weighted_factor(card, state.len() + 1, fre))
            })
            .collect::<Result<Vec<_>>>()?,
        LabeledScoring::LabeledUniverse => {
            if labeled.len() < 2 {
                return Err(FrodError::Param(
                    "labeled-universe scoring needs at least 2 labeled objects".into(),
                ));
            }
            let lstate = EntropyState::new(labeled_rel.relation)?;
            (0..lstate.len())
                .map(|i| outlier_factor(&lstate, i))
                .collect::<Result<Vec<_>>>()?
        }
    };

    Ok(AttributeModel {
        attribute,
        accuracies,
        unlabeled_factors,
        labeled_factors,
    })
}

/// One attribute's share of the final scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeContribution {
    pub attribute: usize,
    pub gamma: f64,
    /// Outlier factors of the unlabeled objects.
    pub factors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    /// Unlabeled object ids, aligned with `scores` and `predictions`.
    pub unlabeled: Vec<usize>,
    pub scores: Vec<f64>,
    pub threshold: f64,
    pub predictions: Vec<bool>,
    pub labeled: Vec<usize>,
    pub labeled_scores: Vec<f64>,
    pub per_attribute: Vec<AttributeContribution>,
    pub config: FrodConfig,
}

impl DetectionResult {
    /// Ids of unlabeled objects predicted as outliers.
    pub fn outliers(&self) -> Vec<usize> {
        self.unlabeled
            .iter()
            .zip(&self.predictions)
            .filter(|(_, &p)| p)
            .map(|(&i, _)| i)
            .collect()
    }

    pub fn threshold_in_unit_interval(&self) -> bool {
        self.threshold > 0.0 && self.threshold < 1.0
    }

    pub fn score_of(&self, id: usize) -> Option<f64> {
        self.unlabeled
            .iter()
            .position(|&i| i == id)
            .map(|p| self.scores[p])
    }
}

/// Runs the whole pipeline for one labeled/unlabeled split.
pub fn detect(
    table: &MixedTable,
    labeled: &[usize],
    unlabeled: &[usize],
    config: &FrodConfig,
) -> Result<DetectionResult> {
    config.validate()?;
    FittedDetector::fit(
        table,
        labeled,
        unlabeled,
        config.delta,
        config.labeled_scoring,
    )?
    .result(config.beta, config.threshold_override)
}

/// Detection using the table's own labels to define the split.
pub fn detect_table(table: &MixedTable, config: &FrodConfig) -> Result<DetectionResult> {
    detect(table, &table.labeled_ids(), &table.unlabeled_ids(), config)
}
