//! Fuzzy information entropy and memoized leave-one-out relative entropy.
//!
//! Removing object `i` from the universe only removes column `i` from every
//! remaining similarity class, so `|[o_j]|` without `o_i` is `card_j - r_ji`
//! and, by symmetry, `card_j - r_ij`. Row sums are computed once; each
//! leave-one-out query is then a single pass over row `i`.

use crate::error::{FrodError, Result};
use crate::fuzzy_relation::FuzzyRelation;

/// Entropies at or below this are treated as zero.
pub const ZERO_ENTROPY_EPS: f64 = 1e-12;

/// `-(1/k) * sum_i log2(card_i / k)` with `card_i` the row sums.
pub fn fuzzy_entropy(rel: &FuzzyRelation) -> f64 {
    entropy_from_cardinalities(&row_sums(rel))
}

fn row_sums(rel: &FuzzyRelation) -> Vec<f64> {
    (0..rel.len()).map(|i| rel.row(i).iter().sum()).collect()
}

fn entropy_from_cardinalities(cards: &[f64]) -> f64 {
    let k = cards.len() as f64;
    let s: f64 = cards.iter().map(|c| (c / k).log2()).sum();
    // avoid returning -0.0
    (-s / k).max(0.0)
}

/// Precomputed per-relation quantities for fast leave-one-out queries.
#[derive(Debug, Clone)]
pub struct EntropyState {
    relation: FuzzyRelation,
    cardinalities: Vec<f64>,
    fe: f64,
    lambda: f64,
}

impl EntropyState {
    pub fn new(relation: FuzzyRelation) -> Result<Self> {
        if relation.is_empty() {
            return Err(FrodError::Param("entropy universe is empty".into()));
        }
        let cardinalities = row_sums(&relation);
        let fe = entropy_from_cardinalities(&cardinalities);
        let lambda = 1.0 / relation.len() as f64;
        Ok(EntropyState {
            relation,
            cardinalities,
            fe,
            lambda,
        })
    }

    pub fn relation(&self) -> &FuzzyRelation {
        &self.relation
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }

    pub fn cardinalities(&self) -> &[f64] {
        &self.cardinalities
    }

    pub fn entropy(&self) -> f64 {
        self.fe
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_degenerate(&self) -> bool {
        self.fe <= ZERO_ENTROPY_EPS
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(FrodError::Index {
                index: i,
                len: self.len(),
            })
        }
    }
}

/// Entropy of the universe with object `i` removed.
pub fn leave_one_out_entropy(state: &EntropyState, i: usize) -> Result<f64> {
    state.check_index(i)?;
    let k = state.len();
    if k < 2 {
        return Err(FrodError::Param(
            "leave-one-out entropy needs at least 2 objects".into(),
        ));
    }
    let rest = (k - 1) as f64;
    let row = state.relation.row(i);
    let s: f64 = state
        .cardinalities
        .iter()
        .zip(row)
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, (&card, &r))| ((card - r) / rest).log2())
        .sum();
    Ok((-s / rest).max(0.0))
}

/// `FE_without_i / FE + lambda`. Fails with [`FrodError::ZeroEntropy`] when `FE` is zero.
pub fn fuzzy_relative_entropy(state: &EntropyState, i: usize) -> Result<f64> {
    if state.is_degenerate() {
        state.check_index(i)?;
        return Err(FrodError::ZeroEntropy);
    }
    Ok(leave_one_out_entropy(state, i)? / state.fe + state.lambda)
}

/// Relative entropy with the zero-entropy convention applied: when the relation
/// distinguishes no objects every object gets `1 + lambda`.
pub fn relative_entropy_or_default(state: &EntropyState, i: usize) -> Result<f64> {
    match fuzzy_relative_entropy(state, i) {
        Err(FrodError::ZeroEntropy) => Ok(1.0 + state.lambda),
        other => other,
    }
}

/// Relative entropy and similarity-class cardinality of an extra object placed
/// into the state's universe, given its memberships to the existing objects.
///
/// The enlarged universe has `k + 1` objects; removing the extra object gives
/// back the original universe, so its leave-one-out entropy is `state.entropy()`.
pub fn appended_relative_entropy(state: &EntropyState, memberships: &[f64]) -> Result<(f64, f64)> {
    if memberships.len() != state.len() {
        return Err(FrodError::UniverseMismatch);
    }
    let k1 = (state.len() + 1) as f64;
    let own_card = 1.0 + memberships.iter().sum::<f64>();
    let s: f64 = state
        .cardinalities
        .iter()
        .zip(memberships)
        .map(|(&c, &r)| ((c + r) / k1).log2())
        .sum::<f64>()
        + (own_card / k1).log2();
    let fe_enlarged = (-s / k1).max(0.0);
    let lambda = 1.0 / k1;
    let fre = if fe_enlarged <= ZERO_ENTROPY_EPS {
        1.0 + lambda
    } else {
        state.fe / fe_enlarged + lambda
    };
    Ok((fre, own_card))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unlabeled-subset relation of the real-valued attribute in the small worked table.
    fn unlabeled_c1() -> FuzzyRelation {
        let f = 5.0 / 6.0;
        #[rustfmt::skip]
        let m = vec![
            1.0, 0.0, 0.0, f, 0.0,
            0.0, 1.0, f, 0.0, 1.0,
            0.0, f, 1.0, 0.0, f,
            f, 0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, f, 0.0, 1.0,
        ];
        FuzzyRelation::from_matrix((5..10).collect(), m, vec![0]).unwrap()
    }

    #[test]
    fn worked_values() {
        let st = EntropyState::new(unlabeled_c1()).unwrap();
        assert!((st.entropy() - 1.088).abs() < 1e-3);
        assert!((leave_one_out_entropy(&st, 0).unwrap() - 0.895).abs() < 1e-3);
        assert!((fuzzy_relative_entropy(&st, 0).unwrap() - 1.023).abs() < 1e-3);
        assert_eq!(st.lambda(), 0.2);
        assert!((st.cardinalities()[0] - 1.8333).abs() < 1e-3);
    }

    #[test]
    fn trivial_relations() {
        let ones = EntropyState::new(FuzzyRelation::all_ones((0..6).collect())).unwrap();
        assert_eq!(ones.entropy(), 0.0);
        assert!(matches!(
            fuzzy_relative_entropy(&ones, 0),
            Err(FrodError::ZeroEntropy)
        ));
        assert_eq!(
            relative_entropy_or_default(&ones, 3).unwrap(),
            1.0 + 1.0 / 6.0
        );

        let id = EntropyState::new(FuzzyRelation::identity((0..8).collect())).unwrap();
        assert!((id.entropy() - 3.0).abs() < 1e-12);
        assert!((leave_one_out_entropy(&id, 2).unwrap() - 7f64.log2()).abs() < 1e-12);
        let expected = 7f64.log2() / 3.0 + 0.125;
        assert!((fuzzy_relative_entropy(&id, 5).unwrap() - expected).abs() < 1e-12);
        assert!(matches!(
            leave_one_out_entropy(&id, 8),
            Err(FrodError::Index { .. })
        ));
    }

    #[test]
    fn appended_matches_explicit_enlargement() {
        let base = unlabeled_c1();
        let extra = [0.9, 0.0, 0.0, 0.7, 0.0];
        let st = EntropyState::new(base.clone()).unwrap();
        let (fre, card) = appended_relative_entropy(&st, &extra).unwrap();

        let k = 6;
        let mut m = vec![0.0; k * k];
        for i in 0..5 {
            for j in 0..5 {
                m[i * k + j] = base.get(i, j);
            }
            m[i * k + 5] = extra[i];
            m[5 * k + i] = extra[i];
        }
        m[k * k - 1] = 1.0;
        let big =
            EntropyState::new(FuzzyRelation::from_matrix((0..6).collect(), m, vec![]).unwrap())
                .unwrap();
        assert!((fre - fuzzy_relative_entropy(&big, 5).unwrap()).abs() < 1e-12);
        assert!((card - big.cardinalities()[5]).abs() < 1e-12);
    }
}
