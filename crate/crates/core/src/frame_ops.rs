//! Synthesis, analysis and frame operators; k-g-fusion verification and
//! optimal bounds.
//!
//! The coefficient space `⊕H_j` is materialized as one coordinate space of
//! dimension `D = Σ d_j` with recorded block offsets, so its inner product is
//! the standard one. A system is a k-g-fusion frame exactly when
//! `R(k) ⊆ R(T_Λ)`; the optimal lower bound is then `‖pinv(T_Λ)·k‖⁻²` and the
//! optimal upper bound is `λ_max(S_Λ)`.

use std::ops::Range;

use serde::Serialize;

use crate::error::{input, FrameError, Result};
use crate::model::{BoundedOperator, GFusionSystem};
use crate::numerics::{
    c, douglas_factor, hermitian_eig, identity, inner, operator_norm, orthonormalize, pinv,
    psd_check, psd_sqrt, CMatrix, CVector, ToleranceProfile, C64,
};
use crate::probes;

/// `T_Λ`, an `n × D` matrix whose block `j` is `v_j π_{W_j} Λ_j*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisOperator {
    matrix: CMatrix,
    blocks: Vec<Range<usize>>,
}

impl SynthesisOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `T_Λ*`, block-wise `v_j Λ_j π_{W_j}`.
    pub fn analysis(&self) -> CMatrix {
        self.matrix.adjoint()
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn coefficient_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, g: &CVector) -> CVector {
        &self.matrix * g
    }

    /// Rows of `m` (a `D × _` matrix) belonging to block `j`.
    pub fn block_rows(&self, m: &CMatrix, j: usize) -> CMatrix {
        let r = &self.blocks[j];
        m.rows(r.start, r.len()).into_owned()
    }
}

pub fn synthesis(system: &GFusionSystem) -> SynthesisOperator {
    let n = system.dim();
    let total = system.total_local_dim();
    let mut matrix = CMatrix::zeros(n, total);
    let mut blocks = Vec::with_capacity(system.len());
    let mut offset = 0;
    for m in system.members() {
        let d = m.operator.local_dim();
        let block = m.subspace.projection() * m.operator.matrix().adjoint() * c(m.weight());
        matrix.columns_mut(offset, d).copy_from(&block);
        blocks.push(offset..offset + d);
        offset += d;
    }
    SynthesisOperator { matrix, blocks }
}

/// `Σ_{j∈I} v_j² π_{W_j} Λ_j* Λ_j π_{W_j}`, summed in ascending index order.
pub fn partial_frame_operator(system: &GFusionSystem, subset: &[usize]) -> Result<CMatrix> {
    let n = system.dim();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut s = CMatrix::zeros(n, n);
    for j in sorted {
        let Some(m) = system.members().get(j) else {
            return input(format!("index {j} out of range for {} members", system.len()));
        };
        let a = m.analysis_block();
        s += a.adjoint() * a * c(m.weight() * m.weight());
    }
    Ok(s)
}

/// `S_Λ = Σ_j v_j² π_{W_j} Λ_j* Λ_j π_{W_j}`.
pub fn frame_operator(system: &GFusionSystem) -> CMatrix {
    let all: Vec<usize> = (0..system.len()).collect();
    partial_frame_operator(system, &all).expect("indices in range")
}

/// `Σ_j v_j² ‖Λ_j π_{W_j} f‖²`.
pub fn frame_sum(system: &GFusionSystem, f: &CVector) -> f64 {
    system
        .members()
        .iter()
        .map(|m| m.weight().powi(2) * (m.analysis_block() * f).norm_squared())
        .sum()
}

/// `k := S_Λ^{1/2}`, for which the system is Parseval.
pub fn parseval_operator(system: &GFusionSystem, tol: &ToleranceProfile) -> Result<BoundedOperator> {
    BoundedOperator::new(psd_sqrt(&frame_operator(system), tol)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub claimed: FrameBounds,
    /// `S − A·kk* ⪰ 0`
    pub lower_holds: bool,
    /// `B·I − S ⪰ 0`
    pub upper_holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_parseval: bool,
    /// `lower` is 0 when the system is not a frame for `k`.
    pub optimal: FrameBounds,
    pub range_inclusion_residual: f64,
    pub parseval_residual: f64,
    pub claimed: Option<ClaimCheck>,
    pub tolerance: ToleranceProfile,
}

impl FrameReport {
    pub fn claims_hold(&self) -> bool {
        self.claimed.is_none_or(|c| c.lower_holds && c.upper_holds)
    }
}

fn check_dims(system: &GFusionSystem, k: &BoundedOperator) -> Result<()> {
    if k.dim() != system.dim() {
        return Err(FrameError::Input(format!(
            "operator acts on dimension {}, system has dimension {}",
            k.dim(),
            system.dim()
        )));
    }
    Ok(())
}

fn lower_from_lambda(lambda_min: f64) -> f64 {
    if lambda_min == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (lambda_min * lambda_min)
    }
}

/// Decides Bessel/frame/Parseval for `k` and checks optional claimed bounds.
pub fn verify_k_g_fusion(
    system: &GFusionSystem,
    k: &BoundedOperator,
    claimed: Option<FrameBounds>,
    tol: &ToleranceProfile,
) -> Result<FrameReport> {
    check_dims(system, k)?;
    let t = synthesis(system);
    let s = frame_operator(system);
    let upper = hermitian_eig(&s, tol)?.max().max(0.0);
    let kk = k.gram();

    let douglas = douglas_factor(k.matrix(), t.matrix(), tol)?;
    let is_frame = douglas.included;
    let lower = if is_frame {
        lower_from_lambda(douglas.lambda_min)
    } else {
        0.0
    };

    let parseval_residual = operator_norm(&(&s - &kk));
    let is_parseval = parseval_residual <= tol.at_scale(operator_norm(&kk));

    let claimed = match claimed {
        None => None,
        Some(b) => Some(ClaimCheck {
            claimed: b,
            lower_holds: psd_check(&(&s - &kk * c(b.lower)), tol)?,
            upper_holds: psd_check(&(identity(system.dim()) * c(b.upper) - &s), tol)?,
        }),
    };

    Ok(FrameReport {
        is_bessel: true,
        is_frame,
        is_parseval,
        optimal: FrameBounds::new(lower, upper),
        range_inclusion_residual: douglas.range_residual,
        parseval_residual,
        claimed,
        tolerance: *tol,
    })
}

/// `(‖pinv(T_Λ)·k‖⁻², λ_max(S_Λ))`.
pub fn optimal_bounds(
    system: &GFusionSystem,
    k: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<FrameBounds> {
    let report = verify_k_g_fusion(system, k, None, tol)?;
    if !report.is_frame {
        return Err(FrameError::NotAFrame(format!(
            "R(k) ⊄ R(T_Λ) (residual {:.3e})",
            report.range_inclusion_residual
        )));
    }
    Ok(report.optimal)
}

/// Whether bounds hold and are tight: inflating the lower bound or deflating
/// the upper one by a relative `1e-6` must break the sandwich `A·kk* ⪯ S ⪯ B·I`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundsCertificate {
    pub lower_holds: bool,
    pub lower_tight: bool,
    pub upper_holds: bool,
    pub upper_tight: bool,
}

impl BoundsCertificate {
    pub fn all(&self) -> bool {
        self.lower_holds && self.lower_tight && self.upper_holds && self.upper_tight
    }
}

pub const TIGHTNESS_MARGIN: f64 = 1e-6;

pub fn certify_bounds(
    system: &GFusionSystem,
    k: &BoundedOperator,
    bounds: FrameBounds,
    tol: &ToleranceProfile,
) -> Result<BoundsCertificate> {
    check_dims(system, k)?;
    let s = frame_operator(system);
    let kk = k.gram();
    let id = identity(system.dim());
    let sandwich_lower = |a: f64| psd_check(&(&s - &kk * c(a)), tol);
    let sandwich_upper = |b: f64| psd_check(&(&id * c(b) - &s), tol);
    Ok(BoundsCertificate {
        lower_holds: sandwich_lower(bounds.lower)?,
        lower_tight: !sandwich_lower(bounds.lower * (1.0 + TIGHTNESS_MARGIN))?,
        upper_holds: sandwich_upper(bounds.upper)?,
        upper_tight: !sandwich_upper(bounds.upper * (1.0 - TIGHTNESS_MARGIN))?,
    })
}

/// Inverse of `S_Λ` restricted to `R(k)`, as a map `S_Λ(R(k)) → R(k)`.
#[derive(Clone, Debug)]
pub struct RestrictedInverse {
    /// `X = B_k · pinv(S·B_k)`, `n × n`.
    pub x: CMatrix,
    /// Orthonormal basis of `R(k)`.
    pub range_basis: CMatrix,
    /// Orthonormal basis of `S_Λ(R(k))`.
    pub image_basis: CMatrix,
    /// `‖X·S·B_k − B_k‖`.
    pub inversion_residual: f64,
    /// Extreme values of `⟨Xf, f⟩/‖f‖²` over `f ∈ S_Λ(R(k))`.
    pub form_range: FrameBounds,
    /// `(B⁻¹, A⁻¹‖k†‖²)`.
    pub predicted_range: FrameBounds,
    /// Largest violation of either predicted bound over the exact range and the probes.
    pub bound_violation: f64,
}

impl RestrictedInverse {
    /// `π_{S_Λ(R(k))}`.
    pub fn image_projection(&self) -> CMatrix {
        &self.image_basis * self.image_basis.adjoint()
    }
}

pub const RESTRICTED_INVERSE_PROBES: usize = 50;

pub fn restricted_inverse(
    system: &GFusionSystem,
    k: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<RestrictedInverse> {
    let bounds = optimal_bounds(system, k, tol)?;
    let s = frame_operator(system);
    let bk = k.range_basis(tol);
    let sbk = &s * &bk;
    let x = &bk * pinv(&sbk, tol);
    let inversion_residual = operator_norm(&(&x * &sbk - &bk));
    let image_basis = orthonormalize(&sbk, tol);

    let pinv_norm = operator_norm(&k.pinv(tol));
    let predicted_range = FrameBounds::new(
        if bounds.upper > 0.0 { 1.0 / bounds.upper } else { f64::INFINITY },
        pinv_norm * pinv_norm / bounds.lower,
    );

    let form = image_basis.adjoint() * &x * &image_basis;
    let form = (&form + form.adjoint()) * c(0.5);
    let (lo, hi) = if form.nrows() == 0 {
        (f64::INFINITY, 0.0)
    } else {
        let e = hermitian_eig(&form, tol)?;
        (e.min(), e.max())
    };
    let form_range = FrameBounds::new(lo, hi);

    let mut violation = 0.0_f64;
    if form.nrows() > 0 {
        violation = violation
            .max(predicted_range.lower - lo)
            .max(hi - predicted_range.upper);
        let field = system.space().field;
        for coeffs in probes::probe_vectors(image_basis.ncols(), field, RESTRICTED_INVERSE_PROBES, 0x5e1)
        {
            let f = &image_basis * coeffs;
            let q = inner(&(&x * &f), &f).re;
            let nn = f.norm_squared();
            violation = violation
                .max(predicted_range.lower * nn - q)
                .max(q - predicted_range.upper * nn);
        }
    }

    Ok(RestrictedInverse {
        x,
        range_basis: bk,
        image_basis,
        inversion_residual,
        form_range,
        predicted_range,
        bound_violation: violation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReconstructionCheck {
    /// `⟨kf, f⟩` after projecting `f` onto `S_Λ(R(k))`.
    pub direct: [f64; 2],
    /// `Σ_j v_j² ⟨X π_{W_j} Λ_j* Λ_j π_{W_j} k f, f⟩`.
    pub expanded: [f64; 2],
    pub residual: f64,
    /// The input had a component outside `S_Λ(R(k))` that was removed.
    pub projected: bool,
    pub within_tolerance: bool,
}

pub fn reconstruction_check(
    system: &GFusionSystem,
    k: &BoundedOperator,
    f: &CVector,
    tol: &ToleranceProfile,
) -> Result<ReconstructionCheck> {
    if f.len() != system.dim() {
        return input(format!(
            "probe has dimension {}, system has dimension {}",
            f.len(),
            system.dim()
        ));
    }
    let ri = restricted_inverse(system, k, tol)?;
    let p = ri.image_projection();
    let g = &p * f;
    let projected = (f - &g).norm() > tol.at_scale(f.norm());
    let kg = k.matrix() * &g;
    let direct = inner(&kg, &g);
    let mut expanded = C64::new(0.0, 0.0);
    for m in system.members() {
        let a = m.analysis_block();
        let term = &ri.x * (a.adjoint() * (&a * &kg)) * c(m.weight().powi(2));
        expanded += inner(&term, &g);
    }
    let residual = (direct - expanded).norm();
    Ok(ReconstructionCheck {
        direct: [direct.re, direct.im],
        expanded: [expanded.re, expanded.im],
        residual,
        projected,
        within_tolerance: residual <= tol.at_scale(direct.norm()),
    })
}

/// Outcome of the mixed-synthesis test `T_Θ T_Λ* = k*`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossFrameReport {
    pub premise_residual: f64,
    pub premise_holds: bool,
    /// Bessel bounds `B₁ = ‖S_Λ‖`, `B₂ = ‖S_Θ‖`.
    pub bessel_lambda: f64,
    pub bessel_theta: f64,
    /// `B₂⁻¹`, certified via `S_Λ − B₂⁻¹ kk* ⪰ 0`.
    pub lambda_lower: f64,
    pub lambda_certified: bool,
    /// `B₁⁻¹`, certified via `S_Θ − B₁⁻¹ k*k ⪰ 0` (Θ is a frame for `k*`).
    pub theta_lower: f64,
    pub theta_certified: bool,
}

pub fn cross_frame_check(
    lambda: &GFusionSystem,
    theta: &GFusionSystem,
    k: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<CrossFrameReport> {
    check_dims(lambda, k)?;
    check_dims(theta, k)?;
    if lambda.local_dims() != theta.local_dims() {
        return input("both systems must share the local spaces H_j");
    }
    let tl = synthesis(lambda);
    let tt = synthesis(theta);
    let premise_residual = operator_norm(&(tt.matrix() * tl.analysis() - k.matrix().adjoint()));
    let premise_holds = premise_residual <= tol.at_scale(k.norm());

    let s_l = frame_operator(lambda);
    let s_t = frame_operator(theta);
    let b1 = hermitian_eig(&s_l, tol)?.max().max(0.0);
    let b2 = hermitian_eig(&s_t, tol)?.max().max(0.0);
    let inv = |b: f64| if b > 0.0 { 1.0 / b } else { f64::INFINITY };
    let lambda_lower = inv(b2);
    let theta_lower = inv(b1);

    let (lambda_certified, theta_certified) = if premise_holds {
        let kk = k.gram();
        let ksk = k.matrix().adjoint() * k.matrix();
        let scale = |x: f64| if x.is_finite() { x } else { 0.0 };
        (
            psd_check(&(&s_l - kk * c(scale(lambda_lower))), tol)?,
            psd_check(&(&s_t - ksk * c(scale(theta_lower))), tol)?,
        )
    } else {
        (false, false)
    };

    Ok(CrossFrameReport {
        premise_residual,
        premise_holds,
        bessel_lambda: b1,
        bessel_theta: b2,
        lambda_lower,
        lambda_certified,
        theta_lower,
        theta_certified,
    })
}
