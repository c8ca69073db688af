//! On-disk representation of a g-fusion system and its named operators.
//!
//! ```json
//! {
//!   "field": "real",
//!   "dim": 2,
//!   "weights": [1.0, 1.0],
//!   "subspaces": [[[1.0, 0.0]], [[0.0, 1.0]]],
//!   "local_operators": [[[1.0, 0.0]], [[0.0, 1.0]]],
//!   "operators": {"k": [[1.0, 0.0], [0.0, 1.0]]}
//! }
//! ```
//!
//! `subspaces[j]` is a list of basis vectors of `W_j`; `local_operators[j]`
//! is the row-major `d_j × n` matrix of `Λ_j`; operators are row-major
//! `n × n`. Complex scalars are `[re, im]` pairs, reals plain numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{input, FrameError, Result};
use crate::model::{
    BoundedOperator, Field, Fixture, GFusionSystem, HilbertSpace, LocalOperator, Member,
    WeightedSubspace,
};
use crate::numerics::{CMatrix, ToleranceProfile, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    fn encode(z: C64, field: Field) -> Self {
        match field {
            Field::Real => Scalar::Real(z.re),
            Field::Complex => Scalar::Complex([z.re, z.im]),
        }
    }

    fn decode(self) -> C64 {
        match self {
            Scalar::Real(x) => C64::new(x, 0.0),
            Scalar::Complex([re, im]) => C64::new(re, im),
        }
    }
}

pub type Rows = Vec<Vec<Scalar>>;

pub fn encode_rows(m: &CMatrix, field: Field) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Scalar::encode(m[(i, j)], field)).collect())
        .collect()
}

/// Decodes a row-major matrix; `cols` fixes the width when there are no rows.
pub fn decode_rows(rows: &Rows, cols: usize, what: &str) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return input(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            ));
        }
        for (j, s) in row.iter().enumerate() {
            let z = s.decode();
            if !(z.re.is_finite() && z.im.is_finite()) {
                return input(format!("{what}: non-finite entry at ({i}, {j})"));
            }
            m[(i, j)] = z;
        }
    }
    Ok(m)
}

/// Field tag for documents: real only when every stored entry is real.
fn field_of_all<'a>(mats: impl IntoIterator<Item = &'a CMatrix>) -> Field {
    mats.into_iter()
        .fold(Field::Real, |f, m| f.join(Field::of(m)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub field: Field,
    pub dim: usize,
    pub weights: Vec<f64>,
    pub subspaces: Vec<Rows>,
    pub local_operators: Vec<Rows>,
    #[serde(default)]
    pub operators: BTreeMap<String, Rows>,
    /// Coupling operator `Q` of a Q-dual, `D × D` with `D = Σ d_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Rows>,
}

impl FrameDocument {
    pub fn from_system(
        name: Option<String>,
        system: &GFusionSystem,
        operators: &BTreeMap<String, BoundedOperator>,
    ) -> Self {
        let mut mats: Vec<&CMatrix> = Vec::new();
        for m in system.members() {
            mats.push(m.subspace.basis());
            mats.push(m.operator.matrix());
        }
        mats.extend(operators.values().map(|k| k.matrix()));
        let field = system.space().field.join(field_of_all(mats));

        Self {
            name,
            seed: None,
            field,
            dim: system.dim(),
            weights: system.members().iter().map(|m| m.weight()).collect(),
            subspaces: system
                .members()
                .iter()
                .map(|m| encode_rows(&m.subspace.basis().transpose(), field))
                .collect(),
            local_operators: system
                .members()
                .iter()
                .map(|m| encode_rows(m.operator.matrix(), field))
                .collect(),
            operators: operators
                .iter()
                .map(|(k, v)| (k.clone(), encode_rows(v.matrix(), field)))
                .collect(),
            coupling: None,
        }
    }

    pub fn from_fixture(fixture: &Fixture) -> Self {
        Self::from_system(Some(fixture.name.clone()), &fixture.system, &fixture.operators)
    }

    pub fn with_coupling(mut self, q: &CMatrix) -> Self {
        if Field::of(q) == Field::Complex && self.field == Field::Real {
            // re-encode everything so the document stays homogeneous
            let fixture_field = Field::Complex;
            let reencode = |rows: &Rows| -> Rows {
                rows.iter()
                    .map(|r| r.iter().map(|s| Scalar::encode(s.decode(), fixture_field)).collect())
                    .collect()
            };
            self.subspaces = self.subspaces.iter().map(reencode).collect();
            self.local_operators = self.local_operators.iter().map(reencode).collect();
            self.operators = self
                .operators
                .iter()
                .map(|(k, v)| (k.clone(), reencode(v)))
                .collect();
            self.field = Field::Complex;
        }
        self.coupling = Some(encode_rows(q, self.field));
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FrameError::Input(format!("malformed document: {e}")))
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    pub fn system(&self, tol: &ToleranceProfile) -> Result<GFusionSystem> {
        let n = self.dim;
        let count = self.weights.len();
        if self.subspaces.len() != count || self.local_operators.len() != count {
            return input(format!(
                "weights, subspaces and local_operators must have equal length ({}, {}, {})",
                count,
                self.subspaces.len(),
                self.local_operators.len()
            ));
        }
        let mut members = Vec::with_capacity(count);
        for j in 0..count {
            let vectors = decode_rows(&self.subspaces[j], n, &format!("subspace {j}"))?.transpose();
            let op = decode_rows(&self.local_operators[j], n, &format!("local operator {j}"))?;
            members.push(Member {
                subspace: WeightedSubspace::from_vectors(vectors, self.weights[j], tol)?,
                operator: LocalOperator::new(op)?,
            });
        }
        GFusionSystem::new(HilbertSpace::new(self.field, n)?, members)
    }

    pub fn operators(&self) -> Result<BTreeMap<String, BoundedOperator>> {
        self.operators
            .iter()
            .map(|(name, rows)| {
                let m = decode_rows(rows, self.dim, &format!("operator {name}"))?;
                if m.nrows() != self.dim {
                    return input(format!(
                        "operator {name} must be {0}x{0}, got {1} rows",
                        self.dim,
                        m.nrows()
                    ));
                }
                Ok((name.clone(), BoundedOperator::new(m)?))
            })
            .collect()
    }

    pub fn coupling_matrix(&self) -> Result<Option<CMatrix>> {
        let Some(rows) = &self.coupling else {
            return Ok(None);
        };
        let width = rows.first().map_or(0, |r| r.len());
        decode_rows(rows, width, "coupling").map(Some)
    }

    pub fn fixture(&self, tol: &ToleranceProfile) -> Result<Fixture> {
        Ok(Fixture {
            name: self.name.clone().unwrap_or_else(|| "document".into()),
            system: self.system(tol)?,
            operators: self.operators()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixture_a, fixture_i};
    use proptest::prelude::*;

    #[test]
    fn fixture_a_round_trip() {
        let doc = FrameDocument::from_fixture(&fixture_a());
        assert_eq!(doc.field, Field::Real);
        let text = doc.to_json();
        let back = FrameDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        let fx = back.fixture(&ToleranceProfile::default()).unwrap();
        assert_eq!(fx.system, fixture_a().system);
        assert_eq!(fx.operators, fixture_a().operators);
    }

    #[test]
    fn rejects_malformed() {
        assert!(FrameDocument::parse("{").is_err());
        assert!(FrameDocument::parse("{\"field\": \"real\"}").is_err());
        let mut doc = FrameDocument::from_fixture(&fixture_i());
        doc.weights.push(1.0);
        assert!(doc.system(&ToleranceProfile::default()).is_err());
        let mut doc = FrameDocument::from_fixture(&fixture_i());
        doc.local_operators[0][0].push(Scalar::Real(0.0));
        assert!(doc.system(&ToleranceProfile::default()).is_err());
        let text = FrameDocument::from_fixture(&fixture_i())
            .to_json()
            .replace("\"dim\"", "\"dimension\"");
        assert!(FrameDocument::parse(&text).is_err());
    }

    #[test]
    fn accepts_complex_pairs_and_plain_numbers_mixed() {
        let text = r#"{"field": "complex", "dim": 1, "weights": [1.0],
            "subspaces": [[[1.0]]], "local_operators": [[[[0.0, 1.0]]]],
            "operators": {"k": [[[2.0, 0.0]]]}}"#;
        let doc = FrameDocument::parse(text).unwrap();
        let sys = doc.system(&ToleranceProfile::default()).unwrap();
        assert_eq!(sys.members()[0].operator.matrix()[(0, 0)], C64::new(0.0, 1.0));
    }

    proptest! {
        #[test]
        fn round_trip_bit_equal(entries in proptest::collection::vec(-1e3f64..1e3, 8), im in proptest::collection::vec(-1.0f64..1.0, 8)) {
            let m = CMatrix::from_fn(2, 4, |i, j| C64::new(entries[i * 4 + j], im[i * 4 + j]));
            let rows = encode_rows(&m, Field::Complex);
            let text = crate::json::to_string(&rows);
            let back: Rows = serde_json::from_str(&text).unwrap();
            let decoded = decode_rows(&back, 4, "m").unwrap();
            prop_assert_eq!(decoded, m);
        }
    }
}
