//! Images of k-g-fusion frames under invertible and unitary operators, and
//! reduction to another operator through range inclusion.

use serde::Serialize;

use crate::error::{precondition, FrameError, Result};
use crate::frame_ops::{optimal_bounds, verify_k_g_fusion, FrameBounds, FrameReport};
use crate::model::{BoundedOperator, Field, GFusionSystem, HilbertSpace, LocalOperator, Member, WeightedSubspace};
use crate::numerics::{c, douglas_factor, identity, operator_norm, psd_check, CMatrix, ToleranceProfile};

#[derive(Clone, Debug)]
pub struct TransformedSystem {
    pub system: GFusionSystem,
    /// Bounds guaranteed for `target_operator`.
    pub certified: FrameBounds,
    pub target_operator: BoundedOperator,
    /// `verify_k_g_fusion(system, target_operator, certified)`.
    pub verification: FrameReport,
}

impl TransformedSystem {
    pub fn passes(&self) -> bool {
        self.verification.is_frame && self.verification.claims_hold()
    }
}

/// Builds `(u·W_j, Λ_j·π_{W_j}·adj, v_j)`.
fn image_system(
    system: &GFusionSystem,
    u: &CMatrix,
    right: &CMatrix,
    use_projection: bool,
    tol: &ToleranceProfile,
) -> Result<GFusionSystem> {
    let mut field = system.space().field.join(Field::of(u));
    let members = system
        .members()
        .iter()
        .map(|m| {
            let subspace = WeightedSubspace::spanned_by(&(u * m.subspace.basis()), m.weight(), tol)?;
            let op = if use_projection {
                m.operator.matrix() * m.subspace.projection() * right
            } else {
                m.operator.matrix() * right
            };
            field = field.join(Field::of(&op));
            Ok(Member {
                subspace,
                operator: LocalOperator::new(op)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GFusionSystem::new(HilbertSpace::new(field, system.dim())?, members)
}

/// `Γ = (uW_j, Λ_j π_{W_j} u*, v_j)` is a `uk`-g-fusion frame with bounds `(A, B‖u‖²)`.
pub fn transform_invertible(
    system: &GFusionSystem,
    k: &BoundedOperator,
    u: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<TransformedSystem> {
    u.ensure_dim(system.dim(), "u")?;
    if !u.is_invertible(tol) {
        return precondition(format!(
            "u is singular (σ_min = {:.3e})",
            u.svd().sigma_min()
        ));
    }
    let bounds = optimal_bounds(system, k, tol)?;
    let gamma = image_system(system, u.matrix(), &u.matrix().adjoint(), true, tol)?;
    let target = u.compose(k)?;
    let certified = FrameBounds::new(bounds.lower, bounds.upper * u.norm().powi(2));
    let verification = verify_k_g_fusion(&gamma, &target, Some(certified), tol)?;
    Ok(TransformedSystem {
        system: gamma,
        certified,
        target_operator: target,
        verification,
    })
}

pub fn is_unitary(u: &BoundedOperator, tol: &ToleranceProfile) -> bool {
    let n = u.dim();
    operator_norm(&(u.matrix().adjoint() * u.matrix() - identity(n))) <= tol.at_scale(1.0)
}

/// `(uW_j, Λ_j u⁻¹, v_j)` is a `(u⁻¹)*k`-g-fusion frame with bounds `(A, B‖u⁻¹‖²)`.
pub fn transform_unitary(
    system: &GFusionSystem,
    k: &BoundedOperator,
    u: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<TransformedSystem> {
    u.ensure_dim(system.dim(), "u")?;
    if !is_unitary(u, tol) {
        return precondition("u is not unitary (‖u*u − I‖ exceeds tolerance)");
    }
    let bounds = optimal_bounds(system, k, tol)?;
    let u_inv = u.inverse(tol)?;
    let gamma = image_system(system, u.matrix(), &u_inv, false, tol)?;
    let target = BoundedOperator::new(u_inv.adjoint() * k.matrix())?;
    let certified = FrameBounds::new(bounds.lower, bounds.upper * operator_norm(&u_inv).powi(2));
    let verification = verify_k_g_fusion(&gamma, &target, Some(certified), tol)?;
    Ok(TransformedSystem {
        system: gamma,
        certified,
        target_operator: target,
        verification,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionReport {
    /// `R(u) ⊆ R(k)`.
    pub included: bool,
    /// Least `λ` with `uu* ⪯ λ² kk*`, when included.
    pub lambda_min: Option<f64>,
    /// `A/λ²`, when included.
    pub certified_lower: Option<f64>,
    /// `S_Λ − (A/λ²)·uu* ⪰ 0`, when included.
    pub certified: Option<bool>,
    /// Direct verification against `u`, independent of the reduction.
    pub direct: FrameReport,
}

impl ReductionReport {
    pub fn derivable(&self) -> bool {
        self.certified == Some(true)
    }
}

/// Transfers frame-ness from `k` to `u` when `R(u) ⊆ R(k)`.
pub fn reduce_operator(
    system: &GFusionSystem,
    k: &BoundedOperator,
    u: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<ReductionReport> {
    u.ensure_dim(system.dim(), "u")?;
    let bounds = optimal_bounds(system, k, tol)?;
    let direct = verify_k_g_fusion(system, u, None, tol)?;
    let douglas = douglas_factor(u.matrix(), k.matrix(), tol)?;
    if !douglas.included {
        return Ok(ReductionReport {
            included: false,
            lambda_min: None,
            certified_lower: None,
            certified: None,
            direct,
        });
    }
    let lambda = douglas.lambda_min;
    let (lower, certified) = if lambda > 0.0 && bounds.lower.is_finite() {
        let lower = bounds.lower / (lambda * lambda);
        let s = crate::frame_ops::frame_operator(system);
        (lower, psd_check(&(s - u.gram() * c(lower)), tol)?)
    } else if lambda == 0.0 {
        // u = 0: every lower bound holds
        (f64::INFINITY, true)
    } else {
        return Err(FrameError::Internal("k = 0 admits no nonzero u".into()));
    };
    Ok(ReductionReport {
        included: true,
        lambda_min: Some(lambda),
        certified_lower: Some(lower),
        certified: Some(certified),
        direct,
    })
}
