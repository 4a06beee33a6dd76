use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frod::dataset::{stratified_split_truth, Attribute, LabelState, MixedTable};
use frod::detector::{detect, outlier_degree, FrodConfig};
use frod::entropy::{fuzzy_entropy, leave_one_out_entropy, EntropyState};
use frod::eval::{auc, average_precision};
use frod::fuzzy_relation::{
    fuzzy_radius, numerical_relation, relation_for_attribute, relation_for_set, FuzzyRelation,
};
use frod::rough_core::{
    approximation_accuracy, lower_approximation, upper_approximation, FuzzySet,
};
use frod::supervision::{attribute_classification_accuracy, class_indicators};
use frod::synthetic::{random_mixed_table, random_relation};

fn numeric_values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 2..max_len)
}

fn one_attribute_table(values: Vec<f64>, labels: Vec<LabelState>) -> MixedTable {
    MixedTable::new(vec![Attribute::numerical("x", values)], labels)
        .unwrap()
        .normalize()
}

fn permuted(rel: &FuzzyRelation, perm: &[usize]) -> FuzzyRelation {
    let k = rel.len();
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            m[i * k + j] = rel.get(perm[i], perm[j]);
        }
    }
    FuzzyRelation::from_matrix((0..k).collect(), m, Vec::new()).unwrap()
}

fn labeled_table() -> impl Strategy<Value = (MixedTable, u64)> {
    (6usize..40, 1usize..3, 0usize..2, any::<u64>()).prop_map(|(n, num, nom, seed)| {
        let full = random_mixed_table(n, num, nom, 0.25, seed).unwrap();
        let mut labels = vec![LabelState::Unlabeled; n];
        // object 0 is an outlier and the last object a normal by construction
        labels[0] = LabelState::Outlier;
        labels[n - 1] = LabelState::Normal;
        labels[n - 2] = LabelState::Normal;
        (full.with_labels(labels).unwrap(), seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relation_is_reflexive_symmetric_and_bounded(values in numeric_values(30), delta in 0.01f64..4.0) {
        let n = values.len();
        let table = one_attribute_table(values, vec![LabelState::Unlabeled; n]);
        let rel = relation_for_attribute(&table, 0, &(0..n).collect::<Vec<_>>(), delta).unwrap();
        for i in 0..n {
            prop_assert_eq!(rel.get(i, i), 1.0);
            for j in 0..n {
                prop_assert_eq!(rel.get(i, j), rel.get(j, i));
                prop_assert!((0.0..=1.0).contains(&rel.get(i, j)));
            }
        }
    }

    #[test]
    fn larger_delta_never_shrinks_memberships(values in numeric_values(25), d1 in 0.01f64..3.0, extra in 0.0f64..3.0) {
        let n = values.len();
        let table = one_attribute_table(values, vec![LabelState::Unlabeled; n]);
        let subset: Vec<usize> = (0..n).collect();
        let small = relation_for_attribute(&table, 0, &subset, d1).unwrap();
        let large = relation_for_attribute(&table, 0, &subset, d1 + extra).unwrap();
        for (a, b) in small.matrix().iter().zip(large.matrix()) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn radius_scales_linearly_in_delta(values in numeric_values(25), delta in 0.01f64..4.0) {
        let base = fuzzy_radius(&values, 1.0).unwrap();
        let scaled = fuzzy_radius(&values, delta).unwrap();
        prop_assert!((scaled - delta * base).abs() <= 1e-9 * (1.0 + scaled.abs()));
    }

    #[test]
    fn set_relation_is_below_each_attribute(n in 3usize..25, seed in any::<u64>(), delta in 0.1f64..3.0) {
        let table = random_mixed_table(n, 2, 2, 0.2, seed).unwrap();
        let subset: Vec<usize> = (0..n).collect();
        let rels: Vec<_> = (0..table.n_attributes())
            .map(|a| relation_for_attribute(&table, a, &subset, delta).unwrap())
            .collect();
        let joint = relation_for_set(&rels).unwrap();
        for rel in &rels {
            for (j, r) in joint.matrix().iter().zip(rel.matrix()) {
                prop_assert!(j <= r);
            }
        }
    }

    #[test]
    fn approximations_bracket_the_set(k in 1usize..20, seed in any::<u64>(), xs in prop::collection::vec(0.0f64..=1.0, 20)) {
        let rel = random_relation(k, seed);
        let x = FuzzySet::new((0..k).collect(), xs[..k].to_vec()).unwrap();
        let lower = lower_approximation(&rel, &x).unwrap();
        let upper = upper_approximation(&rel, &x).unwrap();
        let dual = lower_approximation(&rel, &x.complement()).unwrap();
        for i in 0..k {
            prop_assert!(lower.membership()[i] <= x.membership()[i]);
            prop_assert!(x.membership()[i] <= upper.membership()[i]);
            prop_assert!((upper.membership()[i] - (1.0 - dual.membership()[i])).abs() <= f64::EPSILON);
        }
        let acc = approximation_accuracy(&rel, &x).unwrap();
        prop_assert!((0.0..=1.0).contains(&acc));
    }

    #[test]
    fn gamma_is_linear_in_beta(n in 6usize..30, seed in any::<u64>(), b1 in 0.001f64..50.0, b2 in 0.001f64..50.0) {
        let table = random_mixed_table(n, 1, 1, 0.3, seed).unwrap();
        let universe: Vec<usize> = (0..n).collect();
        let (neg, pos) = class_indicators(&universe, table.labels()).unwrap();
        let rel = relation_for_attribute(&table, 0, &universe, 1.0).unwrap();
        let g1 = attribute_classification_accuracy(&rel, &neg, &pos, 1.0).unwrap().gamma;
        let g2 = attribute_classification_accuracy(&rel, &neg, &pos, 2.0).unwrap().gamma;
        for b in [b1, b2] {
            let g = attribute_classification_accuracy(&rel, &neg, &pos, b).unwrap().gamma;
            prop_assert!((g - (g1 + (b - 1.0) * (g2 - g1))).abs() <= 1e-9 * (1.0 + g.abs()));
        }
    }

    #[test]
    fn leave_one_out_matches_submatrix(k in 2usize..30, seed in any::<u64>()) {
        let rel = random_relation(k, seed);
        let state = EntropyState::new(rel.clone()).unwrap();
        for i in 0..k {
            let rows: Vec<Vec<f64>> = (0..k)
                .filter(|&a| a != i)
                .map(|a| (0..k).filter(|&b| b != i).map(|b| rel.get(a, b)).collect())
                .collect();
            let kk = rows.len() as f64;
            let naive = -rows.iter().map(|r| (r.iter().sum::<f64>() / kk).log2()).sum::<f64>() / kk;
            prop_assert!((leave_one_out_entropy(&state, i).unwrap() - naive.max(0.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn entropy_is_permutation_invariant(k in 2usize..25, seed in any::<u64>(), shuffle_seed in any::<u64>()) {
        let rel = random_relation(k, seed);
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let a = fuzzy_entropy(&rel);
        let b = fuzzy_entropy(&permuted(&rel, &perm));
        prop_assert!((a - b).abs() <= 1e-12);
        let max = (k as f64).log2();
        prop_assert!(a >= 0.0 && a <= max + 1e-12);
    }

    #[test]
    fn metrics_stay_in_unit_interval(scores in prop::collection::vec(0u8..5, 2..80), flips in prop::collection::vec(any::<bool>(), 80)) {
        let n = scores.len();
        let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
        let mut truth = flips[..n].to_vec();
        truth[0] = true;
        truth[n - 1] = false;
        let a = auc(&scores, &truth).unwrap();
        let p = average_precision(&scores, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(p > 0.0 && p <= 1.0);
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        prop_assert!((auc(&flipped, &truth).unwrap() - (1.0 - a)).abs() <= 1e-12);
    }

    #[test]
    fn split_partitions_and_stratifies(n in 20usize..300, frac in 0.05f64..0.5, rate in 0.1f64..0.5, seed in any::<u64>()) {
        let truth: Vec<bool> = (0..n).map(|i| (i as f64) < n as f64 * rate).collect();
        let n_out = truth.iter().filter(|&&t| t).count();
        if let Ok(split) = stratified_split_truth(&truth, frac, seed) {
            let mut all: Vec<usize> = split.labeled.iter().chain(&split.unlabeled).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert_eq!(split.labeled.len(), (n as f64 * frac + 1e-9).floor() as usize);
            let lab_out = split.labeled.iter().filter(|&&i| truth[i]).count();
            prop_assert_eq!(lab_out, (n_out as f64 * frac).round() as usize);
            prop_assert_eq!(&split, &stratified_split_truth(&truth, frac, seed).unwrap());
        }
    }

    #[test]
    fn normalization_is_idempotent(values in numeric_values(40)) {
        let n = values.len();
        let once = one_attribute_table(values, vec![LabelState::Unlabeled; n]);
        let twice = once.normalize();
        prop_assert_eq!(once.attribute(0).unwrap().normalized(), twice.attribute(0).unwrap().normalized());
        for v in once.attribute(0).unwrap().normalized().unwrap() {
            prop_assert!((0.0..=1.0).contains(v));
        }
    }

    #[test]
    fn degree_decreases_with_each_factor(gammas in prop::collection::vec(0.01f64..2.0, 1..6), base in prop::collection::vec(0.0f64..1.5, 6), bump in 0.0f64..1.0, which in 0usize..6) {
        let m = gammas.len();
        let factors = base[..m].to_vec();
        let mut raised = factors.clone();
        raised[which % m] += bump;
        prop_assert!(outlier_degree(&gammas, &raised).unwrap() <= outlier_degree(&gammas, &factors).unwrap());
    }

    #[test]
    fn contributions_recombine_into_scores((table, _) in labeled_table(), delta in 0.2f64..3.0, beta in 0.01f64..10.0) {
        let result = detect(&table, &table.labeled_ids(), &table.unlabeled_ids(), &FrodConfig::new(delta, beta)).unwrap();
        let m = result.per_attribute.len() as f64;
        for (p, &score) in result.scores.iter().enumerate() {
            let sum: f64 = result.per_attribute.iter().map(|c| c.gamma * c.factors[p]).sum();
            prop_assert!((score - (1.0 - sum / m)).abs() <= 1e-12);
        }
        for (p, &score) in result.scores.iter().enumerate() {
            prop_assert_eq!(result.predictions[p], score > result.threshold);
        }
    }

    #[test]
    fn detection_is_deterministic((table, _) in labeled_table(), delta in 0.2f64..3.0) {
        let config = FrodConfig::new(delta, 1.0);
        let a = detect(&table, &table.labeled_ids(), &table.unlabeled_ids(), &config).unwrap();
        let b = detect(&table, &table.labeled_ids(), &table.unlabeled_ids(), &config).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn duplicated_point_ranks_below_isolated_point() {
    // two identical points next to a cluster are less outlying than one far point
    let values = vec![0.0, 0.02, 0.04, 0.05, 0.06, 0.30, 0.30, 1.0, 0.03, 0.9];
    let mut labels = vec![LabelState::Unlabeled; 8];
    labels.extend([LabelState::Normal, LabelState::Outlier]);
    let table = one_attribute_table(values, labels);
    let result = detect(
        &table,
        &table.labeled_ids(),
        &table.unlabeled_ids(),
        &FrodConfig::new(1.0, 1.0),
    )
    .unwrap();
    let far = result.score_of(7).unwrap();
    assert!(result.score_of(5).unwrap() < far);
    assert!(result.scores.iter().all(|&s| s <= far));
}

#[test]
fn numerical_relation_zeroes_pairs_beyond_radius() {
    let rel = numerical_relation(vec![0, 1, 2], &[0.0, 0.1, 0.8], 0.2);
    assert!((rel.get(0, 1) - 0.9).abs() < 1e-12);
    assert_eq!(rel.get(0, 2), 0.0);
    assert_eq!(rel.get(1, 2), 0.0);
}
