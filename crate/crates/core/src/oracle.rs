//! Ground-truth values stored next to committed fixtures.
//!
//! Computed by a route that shares nothing with `frame_ops` beyond the
//! eigensolver: `S` is summed member by member, and the lower bound comes
//! from `λ_max(k* S⁺ k)` on the eigendecomposition of `S` instead of the
//! pseudo-inverse of the synthesis operator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::model::{BoundedOperator, Fixture, GFusionSystem};
use crate::numerics::{c, hermitian_eig, identity, operator_norm, CMatrix, ToleranceProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorOracle {
    pub is_frame: bool,
    /// `null` when the system is not a frame for this operator, or when the operator is 0.
    pub a_op: Option<f64>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSidecar {
    pub fixture: String,
    /// Eigenvalues of `S_Λ`, ascending.
    pub spectrum: Vec<f64>,
    pub b_op: f64,
    pub operators: BTreeMap<String, OperatorOracle>,
}

impl OracleSidecar {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FrameError::Input(format!("malformed oracle: {e}")))
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    pub fn operator(&self, name: &str) -> Result<&OperatorOracle> {
        self.operators
            .get(name)
            .ok_or_else(|| FrameError::Input(format!("oracle {} has no operator {name:?}", self.fixture)))
    }
}

/// `Σ_j v_j² π_j Λ_j* Λ_j π_j`, one member at a time.
pub fn summed_frame_operator(system: &GFusionSystem) -> CMatrix {
    let n = system.dim();
    let mut s = CMatrix::zeros(n, n);
    for m in system.members() {
        let p = m.subspace.projection();
        let l = m.operator.matrix();
        s += &p * l.adjoint() * l * &p * c(m.weight() * m.weight());
    }
    (&s + s.adjoint()) * c(0.5)
}

fn operator_oracle(
    s_pinv: &CMatrix,
    range: &CMatrix,
    k: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<OperatorOracle> {
    let km = k.matrix();
    let k_norm = operator_norm(km);
    let n = km.nrows();
    let outside = operator_norm(&((identity(n) - range) * km));
    let is_frame = outside <= tol.at_scale(k_norm);
    let rank = k.rank(tol);
    let a_op = if is_frame && rank > 0 {
        let m = km.adjoint() * s_pinv * km;
        let m = (&m + m.adjoint()) * c(0.5);
        Some(1.0 / hermitian_eig(&m, tol)?.max())
    } else {
        None
    };
    Ok(OperatorOracle { is_frame, a_op, rank })
}

pub fn compute(fixture: &Fixture, tol: &ToleranceProfile) -> Result<OracleSidecar> {
    let s = summed_frame_operator(&fixture.system);
    let eig = hermitian_eig(&s, tol)?;
    let b_op = eig.max();
    let cutoff = tol.at_scale(b_op);
    let s_pinv = eig.map_spectrum(|x| if x > cutoff { 1.0 / x } else { 0.0 });
    let range = eig.map_spectrum(|x| if x > cutoff { 1.0 } else { 0.0 });
    let operators = fixture
        .operators
        .iter()
        .map(|(name, k)| Ok((name.clone(), operator_oracle(&s_pinv, &range, k, tol)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(OracleSidecar {
        fixture: fixture.name.clone(),
        spectrum: eig.eigenvalues.clone(),
        b_op,
        operators,
    })
}
