//! Attribute classification accuracy from the labeled objects.

use serde::{Deserialize, Serialize};

use crate::dataset::LabelState;
use crate::error::{FrodError, Result};
use crate::fuzzy_relation::FuzzyRelation;
use crate::rough_core::{approximation_accuracy, FuzzySet};

/// Classification accuracy `gamma` of one attribute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributeWeight {
    pub attribute: usize,
    pub gamma: f64,
}

/// The two per-class approximation accuracies behind `gamma`.
///
/// `gamma(beta) = normal + beta * outlier`, so a single evaluation serves any `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassAccuracies {
    pub normal: f64,
    pub outlier: f64,
}

impl ClassAccuracies {
    pub fn gamma(&self, beta: f64) -> f64 {
        self.normal + beta * self.outlier
    }
}

/// Crisp normal/outlier indicator sets over the labeled universe.
pub fn class_indicators(universe: &[usize], labels: &[LabelState]) -> Result<(FuzzySet, FuzzySet)> {
    if universe.len() != labels.len() {
        return Err(FrodError::UniverseMismatch);
    }
    let mut neg = Vec::with_capacity(labels.len());
    let mut pos = Vec::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        match l {
            LabelState::Normal => {
                neg.push(true);
                pos.push(false);
            }
            LabelState::Outlier => {
                neg.push(false);
                pos.push(true);
            }
            LabelState::Unlabeled => {
                return Err(FrodError::DegenerateLabels(format!(
                    "object {} in the labeled subset has no label",
                    universe[i]
                )))
            }
        }
    }
    if !neg.contains(&true) {
        return Err(FrodError::DegenerateLabels(
            "labeled subset contains no normal objects".into(),
        ));
    }
    if !pos.contains(&true) {
        return Err(FrodError::DegenerateLabels(
            "labeled subset contains no outliers".into(),
        ));
    }
    Ok((
        FuzzySet::crisp(universe.to_vec(), &neg)?,
        FuzzySet::crisp(universe.to_vec(), &pos)?,
    ))
}

pub fn class_accuracies(
    rel: &FuzzyRelation,
    neg: &FuzzySet,
    pos: &FuzzySet,
) -> Result<ClassAccuracies> {
    Ok(ClassAccuracies {
        normal: approximation_accuracy(rel, neg)?,
        outlier: approximation_accuracy(rel, pos)?,
    })
}

/// `gamma = acc(normal class) + beta * acc(outlier class)`.
pub fn attribute_classification_accuracy(
    rel: &FuzzyRelation,
    neg: &FuzzySet,
    pos: &FuzzySet,
    beta: f64,
) -> Result<AttributeWeight> {
    check_beta(beta)?;
    let acc = class_accuracies(rel, neg, pos)?;
    Ok(AttributeWeight {
        attribute: rel.attributes().first().copied().unwrap_or(0),
        gamma: acc.gamma(beta),
    })
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(FrodError::Param(format!(
            "beta must be positive, got {beta}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LabelState::*;

    #[test]
    fn indicators() {
        let (neg, pos) =
            class_indicators(&[0, 1, 2, 3, 4], &[Outlier, Normal, Normal, Normal, Normal]).unwrap();
        assert_eq!(neg.membership(), &[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(pos.membership(), &[1.0, 0.0, 0.0, 0.0, 0.0]);

        let (n2, p2) = class_indicators(
            &[0, 1, 2, 3, 4],
            &[Normal, Outlier, Outlier, Outlier, Outlier],
        )
        .unwrap();
        assert_eq!(n2.membership(), pos.membership());
        assert_eq!(p2.membership(), neg.membership());

        assert!(matches!(
            class_indicators(&[0, 1], &[Normal, Normal]),
            Err(FrodError::DegenerateLabels(_))
        ));
    }

    #[test]
    fn identity_relation_gives_one_plus_beta() {
        let id = FuzzyRelation::identity((0..4).collect());
        let (neg, pos) =
            class_indicators(&[0, 1, 2, 3], &[Normal, Outlier, Normal, Normal]).unwrap();
        let w = attribute_classification_accuracy(&id, &neg, &pos, 2.5).unwrap();
        assert_eq!(w.gamma, 3.5);
        assert!(attribute_classification_accuracy(&id, &neg, &pos, 0.0).is_err());
    }
}
