//! Fuzzy similarity relations induced by single attributes or attribute sets.

use std::io::{Read, Write};

use serde::Serialize;

use crate::dataset::{AttributeKind, MixedTable};
use crate::error::{FrodError, Result};

/// Symmetric, reflexive membership matrix over an ordered object subset.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRelation {
    subset: Vec<usize>,
    /// Row-major `k * k` membership degrees.
    matrix: Vec<f64>,
    attributes: Vec<usize>,
}

impl FuzzyRelation {
    /// Builds a relation from an explicit row-major matrix, checking the invariants.
    pub fn from_matrix(
        subset: Vec<usize>,
        matrix: Vec<f64>,
        attributes: Vec<usize>,
    ) -> Result<Self> {
        let k = subset.len();
        if matrix.len() != k * k {
            return Err(FrodError::Param(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                k * k
            )));
        }
        for i in 0..k {
            if matrix[i * k + i] != 1.0 {
                return Err(FrodError::Param(format!(
                    "relation is not reflexive at {i}"
                )));
            }
            for j in 0..k {
                let v = matrix[i * k + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(FrodError::Param(format!(
                        "entry ({i},{j}) = {v} outside [0,1]"
                    )));
                }
                if v != matrix[j * k + i] {
                    return Err(FrodError::Param(format!(
                        "relation is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(FuzzyRelation {
            subset,
            matrix,
            attributes,
        })
    }

    pub fn identity(subset: Vec<usize>) -> Self {
        let k = subset.len();
        let mut matrix = vec![0.0; k * k];
        for i in 0..k {
            matrix[i * k + i] = 1.0;
        }
        FuzzyRelation {
            subset,
            matrix,
            attributes: Vec::new(),
        }
    }

    pub fn all_ones(subset: Vec<usize>) -> Self {
        let k = subset.len();
        FuzzyRelation {
            subset,
            matrix: vec![1.0; k * k],
            attributes: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn attributes(&self) -> &[usize] {
        &self.attributes
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.len() + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.len();
        &self.matrix[i * k..(i + 1) * k]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Rows as nested vectors, for display and serialization.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Writes `k` as a little-endian u64 followed by the row-major matrix as little-endian f64.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for v in &self.matrix {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a dump written by [`FuzzyRelation::write_dump`]; the subset becomes `0..k`.
    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let k = usize::try_from(u64::from_le_bytes(word))
            .map_err(|_| FrodError::Param("dump size overflows usize".into()))?;
        let mut matrix = Vec::with_capacity(k * k);
        for _ in 0..k * k {
            r.read_exact(&mut word)?;
            matrix.push(f64::from_le_bytes(word));
        }
        FuzzyRelation::from_matrix((0..k).collect(), matrix, Vec::new())
    }
}

impl Serialize for FuzzyRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FuzzyRelation", 3)?;
        st.serialize_field("subset", self.subset())?;
        st.serialize_field("attributes", self.attributes())?;
        st.serialize_field("rows", &self.to_rows())?;
        st.end()
    }
}

/// Adaptive fuzzy radius: `delta` times the mean absolute difference over all
/// ordered pairs of the subset, diagonal included (denominator `k²`).
pub fn fuzzy_radius(values: &[f64], delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let k = values.len();
    if k < 2 {
        return Err(FrodError::Param(format!(
            "fuzzy radius needs at least 2 values, got {k}"
        )));
    }
    Ok(delta * pair_difference_sum(values) / (k * k) as f64)
}

/// Sum of `|v_i - v_j|` over all ordered pairs.
pub(crate) fn pair_difference_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            sum += (a - b).abs();
        }
    }
    2.0 * sum
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(FrodError::Param(format!(
            "delta must be positive, got {delta}"
        )))
    }
}

/// Membership degree for a numerical pair under a given radius.
#[inline]
pub fn numerical_membership(a: f64, b: f64, radius: f64) -> f64 {
    let d = (a - b).abs();
    if d <= radius {
        1.0 - d
    } else {
        0.0
    }
}

/// Relation over `values` (already restricted to the subset) with an explicit radius.
pub fn numerical_relation(subset: Vec<usize>, values: &[f64], radius: f64) -> FuzzyRelation {
    let k = values.len();
    debug_assert_eq!(k, subset.len());
    let mut matrix = vec![0.0; k * k];
    for i in 0..k {
        matrix[i * k + i] = 1.0;
        for j in i + 1..k {
            let v = numerical_membership(values[i], values[j], radius);
            matrix[i * k + j] = v;
            matrix[j * k + i] = v;
        }
    }
    FuzzyRelation {
        subset,
        matrix,
        attributes: Vec::new(),
    }
}

/// Crisp equality relation over category codes.
pub fn nominal_relation(subset: Vec<usize>, codes: &[u32]) -> FuzzyRelation {
    let k = codes.len();
    let mut matrix = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            if codes[i] == codes[j] {
                matrix[i * k + j] = 1.0;
            }
        }
    }
    FuzzyRelation {
        subset,
        matrix,
        attributes: Vec::new(),
    }
}

/// A single-attribute relation together with the radius it was built with
/// (`None` for nominal attributes).
#[derive(Debug, Clone)]
pub struct AttributeRelation {
    pub relation: FuzzyRelation,
    pub radius: Option<f64>,
}

impl AttributeRelation {
    /// Memberships of object `object` to every object of the relation's subset,
    /// using this relation's radius.
    pub fn memberships_of(&self, table: &MixedTable, object: usize) -> Result<Vec<f64>> {
        let attribute = self.relation.attributes[0];
        let attr = table.attribute(attribute).ok_or(FrodError::Index {
            index: attribute,
            len: table.n_attributes(),
        })?;
        if object >= table.n_objects() {
            return Err(FrodError::Index {
                index: object,
                len: table.n_objects(),
            });
        }
        let subset = self.relation.subset();
        Ok(match (attr.codes(), attr.normalized(), self.radius) {
            (Some(codes), _, _) => subset
                .iter()
                .map(|&j| if codes[j] == codes[object] { 1.0 } else { 0.0 })
                .collect(),
            (None, Some(values), Some(radius)) => subset
                .iter()
                .map(|&j| numerical_membership(values[object], values[j], radius))
                .collect(),
            _ => return Err(FrodError::NotNormalized(attr.name().to_string())),
        })
    }
}

/// Relation induced by one attribute over `subset`. Numerical radii are
/// computed over this subset only.
pub fn relation_for_attribute(
    table: &MixedTable,
    attribute: usize,
    subset: &[usize],
    delta: f64,
) -> Result<FuzzyRelation> {
    Ok(attribute_relation(table, attribute, subset, delta)?.relation)
}

pub fn attribute_relation(
    table: &MixedTable,
    attribute: usize,
    subset: &[usize],
    delta: f64,
) -> Result<AttributeRelation> {
    check_delta(delta)?;
    if subset.is_empty() {
        return Err(FrodError::Param("relation subset is empty".into()));
    }
    let attr = table.attribute(attribute).ok_or(FrodError::Index {
        index: attribute,
        len: table.n_attributes(),
    })?;
    let n = table.n_objects();
    if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
        return Err(FrodError::Index { index: bad, len: n });
    }
    let (mut relation, radius) = match attr.kind() {
        AttributeKind::Nominal => {
            let codes = attr.codes().expect("nominal attribute has codes");
            let sub: Vec<u32> = subset.iter().map(|&i| codes[i]).collect();
            (nominal_relation(subset.to_vec(), &sub), None)
        }
        AttributeKind::Numerical => {
            let values = attr
                .normalized()
                .ok_or_else(|| FrodError::NotNormalized(attr.name().to_string()))?;
            let sub: Vec<f64> = subset.iter().map(|&i| values[i]).collect();
            let radius = if sub.len() < 2 {
                0.0
            } else {
                fuzzy_radius(&sub, delta)?
            };
            (
                numerical_relation(subset.to_vec(), &sub, radius),
                Some(radius),
            )
        }
    };
    relation.attributes = vec![attribute];
    Ok(AttributeRelation { relation, radius })
}

/// Relation induced by an attribute set: elementwise minimum of the member relations.
pub fn relation_for_set(relations: &[FuzzyRelation]) -> Result<FuzzyRelation> {
    let (first, rest) = relations
        .split_first()
        .ok_or_else(|| FrodError::Param("attribute set is empty".into()))?;
    let mut out = first.clone();
    for rel in rest {
        if rel.subset != out.subset {
            return Err(FrodError::SubsetMismatch);
        }
        for (o, &v) in out.matrix.iter_mut().zip(&rel.matrix) {
            *o = o.min(v);
        }
        for &a in &rel.attributes {
            if !out.attributes.contains(&a) {
                out.attributes.push(a);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_examples() {
        let c1 = [1.0, 1.0 / 6.0, 0.5, 1.0 / 6.0, 2.0 / 3.0];
        assert!((fuzzy_radius(&c1, 1.0).unwrap() - 0.3467).abs() < 1e-4);
        let c2 = [0.0, 0.5, 0.0, 0.5, 0.5];
        assert!((fuzzy_radius(&c2, 1.0).unwrap() - 0.24).abs() < 1e-12);
        assert_eq!(fuzzy_radius(&[0.3; 4], 2.0).unwrap(), 0.0);
        assert!(matches!(fuzzy_radius(&c2, 0.0), Err(FrodError::Param(_))));
        assert!(matches!(
            fuzzy_radius(&[0.1], 1.0),
            Err(FrodError::Param(_))
        ));
    }

    #[test]
    fn zero_radius_is_equality() {
        let rel = numerical_relation(vec![0, 1, 2], &[0.2, 0.2, 0.3], 0.0);
        assert_eq!(rel.row(0), &[1.0, 1.0, 0.0]);
        assert_eq!(rel.row(2), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn set_composition() {
        let a = FuzzyRelation::from_matrix(
            vec![0, 1, 2],
            vec![1.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 1.0],
            vec![0],
        )
        .unwrap();
        assert_eq!(relation_for_set(std::slice::from_ref(&a)).unwrap(), a);
        let ones = FuzzyRelation::all_ones(vec![0, 1, 2]);
        assert_eq!(
            relation_for_set(&[a.clone(), ones]).unwrap().matrix(),
            a.matrix()
        );
        let other = FuzzyRelation::identity(vec![0, 1]);
        assert!(matches!(
            relation_for_set(&[a, other]),
            Err(FrodError::SubsetMismatch)
        ));
        assert!(relation_for_set(&[]).is_err());
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(FuzzyRelation::from_matrix(vec![0, 1], vec![1.0, 0.3, 0.2, 1.0], vec![]).is_err());
        assert!(FuzzyRelation::from_matrix(vec![0, 1], vec![0.9, 0.0, 0.0, 1.0], vec![]).is_err());
        assert!(FuzzyRelation::from_matrix(vec![0, 1], vec![1.0, 1.5, 1.5, 1.0], vec![]).is_err());
    }

    #[test]
    fn dump_roundtrip() {
        let rel = numerical_relation(vec![0, 1, 2], &[0.0, 0.1, 0.9], 0.5);
        let mut buf = Vec::new();
        rel.write_dump(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 9 * 8);
        assert_eq!(&buf[..8], &3u64.to_le_bytes());
        let back = FuzzyRelation::read_dump(buf.as_slice()).unwrap();
        assert_eq!(back.matrix(), rel.matrix());
    }
}
