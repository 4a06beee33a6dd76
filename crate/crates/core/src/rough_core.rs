//! Fuzzy rough set primitives over a finite universe.
//!
//! Infima and suprema are realized as minima and maxima over the universe.
//! Cardinalities are sequential sums in universe order, so results never
//! depend on how callers parallelize.

use crate::error::{FrodError, Result};
use crate::fuzzy_relation::FuzzyRelation;

/// Membership vector over an ordered object universe.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    universe: Vec<usize>,
    membership: Vec<f64>,
}

impl FuzzySet {
    pub fn new(universe: Vec<usize>, membership: Vec<f64>) -> Result<Self> {
        if universe.len() != membership.len() {
            return Err(FrodError::UniverseMismatch);
        }
        if let Some(v) = membership.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(FrodError::Param(format!("membership {v} outside [0,1]")));
        }
        Ok(FuzzySet {
            universe,
            membership,
        })
    }

    /// Crisp set from a boolean indicator.
    pub fn crisp(universe: Vec<usize>, members: &[bool]) -> Result<Self> {
        FuzzySet::new(
            universe,
            members.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
    }

    pub fn constant(universe: Vec<usize>, value: f64) -> Result<Self> {
        let k = universe.len();
        FuzzySet::new(universe, vec![value; k])
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn membership(&self) -> &[f64] {
        &self.membership
    }

    pub fn len(&self) -> usize {
        self.membership.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_empty()
    }

    /// Fuzzy cardinality: the sum of memberships.
    pub fn cardinality(&self) -> f64 {
        self.membership.iter().sum()
    }

    pub fn complement(&self) -> FuzzySet {
        FuzzySet {
            universe: self.universe.clone(),
            membership: self.membership.iter().map(|v| 1.0 - v).collect(),
        }
    }

    /// Pointwise maximum.
    pub fn union(&self, other: &FuzzySet) -> Result<FuzzySet> {
        if self.universe != other.universe {
            return Err(FrodError::UniverseMismatch);
        }
        Ok(FuzzySet {
            universe: self.universe.clone(),
            membership: self
                .membership
                .iter()
                .zip(&other.membership)
                .map(|(a, b)| a.max(*b))
                .collect(),
        })
    }
}

fn check_universe(rel: &FuzzyRelation, x: &FuzzySet) -> Result<()> {
    if rel.subset() == x.universe() {
        Ok(())
    } else {
        Err(FrodError::UniverseMismatch)
    }
}

/// `out(o_i) = min_o max(1 - R(o_i, o), X(o))`
pub fn lower_approximation(rel: &FuzzyRelation, x: &FuzzySet) -> Result<FuzzySet> {
    check_universe(rel, x)?;
    let membership = (0..rel.len())
        .map(|i| {
            rel.row(i)
                .iter()
                .zip(&x.membership)
                .map(|(&r, &m)| (1.0 - r).max(m))
                .fold(1.0, f64::min)
        })
        .collect();
    Ok(FuzzySet {
        universe: x.universe.clone(),
        membership,
    })
}

/// `out(o_i) = max_o min(R(o_i, o), X(o))`
pub fn upper_approximation(rel: &FuzzyRelation, x: &FuzzySet) -> Result<FuzzySet> {
    check_universe(rel, x)?;
    let membership = (0..rel.len())
        .map(|i| {
            rel.row(i)
                .iter()
                .zip(&x.membership)
                .map(|(&r, &m)| r.min(m))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(FuzzySet {
        universe: x.universe.clone(),
        membership,
    })
}

/// `|lower(x)| / |upper(x)|`.
pub fn approximation_accuracy(rel: &FuzzyRelation, x: &FuzzySet) -> Result<f64> {
    let upper = upper_approximation(rel, x)?.cardinality();
    if upper <= 0.0 {
        return Err(FrodError::DegenerateSet(
            "upper approximation has zero cardinality".into(),
        ));
    }
    Ok(lower_approximation(rel, x)?.cardinality() / upper)
}

/// The fuzzy similarity class centered at object index `i` (row `i` of the relation).
pub fn similarity_class(rel: &FuzzyRelation, i: usize) -> Result<FuzzySet> {
    if i >= rel.len() {
        return Err(FrodError::Index {
            index: i,
            len: rel.len(),
        });
    }
    Ok(FuzzySet {
        universe: rel.subset().to_vec(),
        membership: rel.row(i).to_vec(),
    })
}

/// Approximation accuracy of a decision partition: the cardinality of the
/// union of lower approximations over the summed upper cardinalities.
pub fn decision_faa(rel: &FuzzyRelation, classes: &[FuzzySet]) -> Result<f64> {
    if classes.is_empty() {
        return Err(FrodError::DegenerateSet("no decision classes".into()));
    }
    let mut union: Option<FuzzySet> = None;
    let mut upper_total = 0.0;
    for class in classes {
        let lower = lower_approximation(rel, class)?;
        upper_total += upper_approximation(rel, class)?.cardinality();
        union = Some(match union {
            None => lower,
            Some(u) => u.union(&lower)?,
        });
    }
    if upper_total <= 0.0 {
        return Err(FrodError::DegenerateSet(
            "decision classes have zero upper cardinality".into(),
        ));
    }
    Ok(union.expect("at least one class").cardinality() / upper_total)
}
