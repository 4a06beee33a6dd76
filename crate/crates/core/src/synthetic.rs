//! Seeded synthetic data: random relations, tight-cluster-plus-isolated-point
//! instances, and random mixed tables for scaling and determinism checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Attribute, LabelState, MixedTable, Split};
use crate::error::Result;
use crate::fuzzy_relation::{pair_difference_sum, FuzzyRelation};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric reflexive relation with entries in [0,1]. Roughly a
/// quarter of the off-diagonal entries are exactly 0 and a tenth exactly 1.
pub fn random_relation(k: usize, seed: u64) -> FuzzyRelation {
    let mut r = rng(seed);
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        m[i * k + i] = 1.0;
        for j in i + 1..k {
            let u: f64 = r.random();
            let v = if u < 0.25 {
                0.0
            } else if u < 0.35 {
                1.0
            } else {
                r.random()
            };
            m[i * k + j] = v;
            m[j * k + i] = v;
        }
    }
    FuzzyRelation::from_matrix((0..k).collect(), m, Vec::new()).expect("valid by construction")
}

/// One attribute whose values form a tight group plus a single far point.
#[derive(Debug, Clone)]
pub struct IsolatedPointInstance {
    /// Values in [0,1]; min 0 and max 1, so they are already normalized.
    pub values: Vec<f64>,
    /// Index of the isolated point.
    pub isolated: usize,
    /// Radius multiplier that makes the adaptive radius equal `radius`.
    pub delta: f64,
    pub radius: f64,
}

impl IsolatedPointInstance {
    /// Whether every in-group difference is within the radius and every
    /// difference to the isolated point exceeds it.
    pub fn satisfies_hypotheses(&self, radius: f64) -> bool {
        let n = self.values.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let d = (self.values[i] - self.values[j]).abs();
                if i == j {
                    true
                } else if i == self.isolated || j == self.isolated {
                    d > radius
                } else {
                    d <= radius
                }
            })
        })
    }
}

/// Group of `group_size` points plus one isolated point, with a `delta`
/// chosen so the adaptive radius sits strictly between the group width and
/// the gap to the isolated point.
pub fn isolated_point_instance(group_size: usize, seed: u64) -> IsolatedPointInstance {
    assert!(group_size >= 2, "need at least two grouped points");
    let mut r = rng(seed);
    let far_low = r.random_bool(0.5);
    let width: f64 = r.random_range(0.01..0.2);
    let gap: f64 = r.random_range(0.3..0.8);
    // group spans [1 - width, 1] or [0, width]; the isolated point sits `gap`
    // beyond the group edge, then everything is rescaled to [0,1]
    let mut group: Vec<f64> = (0..group_size)
        .map(|_| r.random_range(0.0..width))
        .collect();
    group[0] = 0.0;
    group[1] = width;
    let isolated_at = width + gap;
    let span = isolated_at;
    let mut values: Vec<f64> = group.iter().map(|v| v / span).collect();
    values.push(1.0);
    if far_low {
        for v in &mut values {
            *v = 1.0 - *v;
        }
    }
    let isolated = values.len() - 1;
    let w = width / span;
    let g = gap / span;
    let radius = w + r.random_range(0.2..0.8) * (g - w);
    let k = values.len();
    let mean_diff = pair_difference_sum(&values) / (k * k) as f64;
    IsolatedPointInstance {
        delta: radius / mean_diff,
        radius,
        values,
        isolated,
    }
}

/// A one-attribute table built from an isolated-point instance: the group and
/// the isolated point are unlabeled, a few extra group members are labeled
/// normal, and one labeled outlier sits beyond the isolated point's side.
///
/// Returns the normalized table, the split, and the `delta` under which the
/// unlabeled subset's adaptive radius satisfies the instance's hypotheses.
pub fn isolated_point_table(
    group_size: usize,
    labeled_normals: usize,
    seed: u64,
) -> (MixedTable, Split, f64) {
    let inst = isolated_point_instance(group_size, seed);
    let mut r = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let group_vals: Vec<f64> = (0..inst.values.len())
        .filter(|&i| i != inst.isolated)
        .map(|i| inst.values[i])
        .collect();
    let lo = group_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = group_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut values = inst.values.clone();
    let mut labels = vec![LabelState::Unlabeled; values.len()];
    for _ in 0..labeled_normals.max(1) {
        values.push(r.random_range(lo..=hi));
        labels.push(LabelState::Normal);
    }
    // outlier on the isolated point's side, inside the value range
    values.push(inst.values[inst.isolated]);
    labels.push(LabelState::Outlier);

    let table = MixedTable::new(vec![Attribute::numerical("x", values)], labels)
        .expect("valid table")
        .normalize();
    let split = Split {
        labeled: table.labeled_ids(),
        unlabeled: table.unlabeled_ids(),
    };
    (table, split, inst.delta)
}

/// Fully labeled random table: normals drawn around per-attribute centers,
/// outliers drawn uniformly over a wider range or from rare categories.
pub fn random_mixed_table(
    n: usize,
    numerical: usize,
    nominal: usize,
    outlier_fraction: f64,
    seed: u64,
) -> Result<MixedTable> {
    let mut r = rng(seed);
    let n_out = ((n as f64 * outlier_fraction).round() as usize).clamp(1, n - 1);
    let is_out: Vec<bool> = (0..n).map(|i| i < n_out).collect();
    let mut attributes = Vec::with_capacity(numerical + nominal);
    for a in 0..numerical {
        let center: f64 = r.random_range(-1.0..1.0);
        let vals = is_out
            .iter()
            .map(|&o| {
                if o {
                    r.random_range(-4.0..4.0)
                } else {
                    center + r.random_range(-0.5..0.5) * r.random_range(0.0..1.0)
                }
            })
            .collect();
        attributes.push(Attribute::numerical(format!("x{a}"), vals));
    }
    for a in 0..nominal {
        let vals: Vec<String> = is_out
            .iter()
            .map(|&o| {
                let c = if o {
                    r.random_range(0..8)
                } else {
                    r.random_range(0..3)
                };
                format!("c{c}")
            })
            .collect();
        attributes.push(Attribute::nominal(format!("n{a}"), vals));
    }
    let labels = is_out
        .iter()
        .map(|&o| {
            if o {
                LabelState::Outlier
            } else {
                LabelState::Normal
            }
        })
        .collect();
    Ok(MixedTable::new(attributes, labels)?.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy_relation::fuzzy_radius;

    #[test]
    fn instance_radius_matches_delta() {
        for seed in 0..20 {
            let inst = isolated_point_instance(10, seed);
            let r = fuzzy_radius(&inst.values, inst.delta).unwrap();
            assert!((r - inst.radius).abs() < 1e-12);
            assert!(inst.satisfies_hypotheses(r));
        }
    }

    #[test]
    fn random_relation_is_valid_and_seeded() {
        let a = random_relation(7, 3);
        assert_eq!(a, random_relation(7, 3));
        assert_ne!(a, random_relation(7, 4));
    }
}
