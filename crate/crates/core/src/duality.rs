//! Q-duals and k-g-fusion duals: construction, verification, partial
//! operators and the subset identities.
//!
//! A Q-dual couples `Λ` with a Bessel family `Λ̃` through `Q: ⊕H_j → ⊕H̃_j`
//! so that `T_Λ Q* T̃* = k`. A k-g-fusion dual reproduces `k` as
//! `Σ_j v_j² π_{W_j} Λ_j* Λ̃_j π_{W̃_j}`.

use serde::Serialize;

use crate::error::{input, precondition, FrameError, Result};
use crate::frame_ops::{
    frame_operator, optimal_bounds, partial_frame_operator, restricted_inverse, synthesis,
    verify_k_g_fusion, FrameReport,
};
use crate::model::{
    BoundedOperator, Field, GFusionSystem, HilbertSpace, LocalOperator, Member, WeightedSubspace,
};
use crate::numerics::{
    c, hermitian_eig, identity, inner, operator_norm, pinv, psd_check, real_vector,
    CMatrix, CVector, ToleranceProfile, C64,
};
use crate::probes;

pub const DUAL_PROBES: usize = 50;
const PROBE_SEED: u64 = 0xd1;

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn same_index_set(base: &GFusionSystem, dual: &GFusionSystem) -> Result<()> {
    if base.dim() != dual.dim() || base.len() != dual.len() {
        return input(format!(
            "base has {} members on dimension {}, dual has {} on dimension {}",
            base.len(),
            base.dim(),
            dual.len(),
            dual.dim()
        ));
    }
    Ok(())
}

/// Rebuilds a system from parts, tagging it complex if any part is.
fn assemble(
    like: &GFusionSystem,
    parts: Vec<(WeightedSubspace, CMatrix)>,
) -> Result<GFusionSystem> {
    let mut field = like.space().field;
    let mut members = Vec::with_capacity(parts.len());
    for (subspace, op) in parts {
        field = field.join(Field::of(subspace.basis())).join(Field::of(&op));
        members.push(Member {
            subspace,
            operator: LocalOperator::new(op)?,
        });
    }
    GFusionSystem::new(HilbertSpace::new(field, like.dim())?, members)
}

#[derive(Clone, Debug)]
pub struct QDualPair {
    pub base: GFusionSystem,
    pub dual: GFusionSystem,
    /// `D̃ × D`, mapping `⊕H_j → ⊕H̃_j`.
    pub q: CMatrix,
    pub k: BoundedOperator,
    /// `‖T_Λ Q* T̃* − k‖`.
    pub residual: f64,
}

impl QDualPair {
    pub fn new(base: GFusionSystem, dual: GFusionSystem, q: CMatrix, k: BoundedOperator) -> Result<Self> {
        k.ensure_dim(base.dim(), "k")?;
        if dual.dim() != base.dim() {
            return input("base and dual live on different spaces");
        }
        let (d, dt) = (base.total_local_dim(), dual.total_local_dim());
        if q.nrows() != dt || q.ncols() != d {
            return input(format!(
                "Q must be {dt}x{d}, got {}x{}",
                q.nrows(),
                q.ncols()
            ));
        }
        let residual = operator_norm(&(coupled(&base, &dual, &q) - k.matrix()));
        Ok(Self {
            base,
            dual,
            q,
            k,
            residual,
        })
    }

    pub fn is_certified(&self, tol: &ToleranceProfile) -> bool {
        self.residual <= tol.at_scale(self.k.norm())
    }
}

/// `T_Λ Q* T̃*`.
fn coupled(base: &GFusionSystem, dual: &GFusionSystem, q: &CMatrix) -> CMatrix {
    synthesis(base).matrix() * q.adjoint() * synthesis(dual).analysis()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QDualReport {
    /// `‖T_Λ Q* T̃* − k‖`
    pub form1_residual: f64,
    /// `‖T̃ Q T_Λ* − k*‖`
    pub form2_residual: f64,
    /// Norm of the sesquilinear defect `⟨kf, f′⟩ − ⟨Q*T̃*f, T_Λ*f′⟩`, assembled
    /// entrywise from basis pairs.
    pub form3_residual: f64,
    /// Largest defect of form 3 over unit probe pairs.
    pub form3_probe_residual: f64,
    pub verdicts: [bool; 3],
    /// Largest pairwise difference of the three residuals.
    pub forms_spread: f64,
    pub certified: bool,
}

pub fn verify_q_dual(pair: &QDualPair, tol: &ToleranceProfile) -> Result<QDualReport> {
    let n = pair.base.dim();
    let t = synthesis(&pair.base);
    let tt = synthesis(&pair.dual);
    let k = pair.k.matrix();
    let scale = tol.at_scale(pair.k.norm());

    let r1 = operator_norm(&(t.matrix() * pair.q.adjoint() * tt.analysis() - k));
    let r2 = operator_norm(&(tt.matrix() * &pair.q * t.analysis() - k.adjoint()));

    let left = |f: &CVector| pair.q.adjoint() * (tt.analysis() * f);
    let right = |g: &CVector| t.analysis() * g;
    let defect = |f: &CVector, g: &CVector| inner(&(k * f), g) - inner(&left(f), &right(g));

    let basis = probes::probe_vectors(n, pair.base.space().field, 0, 0);
    let form = CMatrix::from_fn(n, n, |i, j| defect(&basis[j], &basis[i]));
    let r3 = operator_norm(&form);

    let field = pair.base.space().field.join(pair.dual.space().field);
    let ps = probes::probe_vectors(n, field, DUAL_PROBES, PROBE_SEED);
    let qs = probes::probe_vectors(n, field, DUAL_PROBES, PROBE_SEED + 1);
    let probe = ps
        .iter()
        .zip(&qs)
        .map(|(f, g)| defect(f, g).norm())
        .fold(0.0, f64::max);

    let spread = (r1 - r2).abs().max((r1 - r3).abs()).max((r2 - r3).abs());
    if spread > scale {
        return Err(FrameError::Internal(format!(
            "equivalent Q-dual forms disagree: {r1:.3e}, {r2:.3e}, {r3:.3e}"
        )));
    }
    let verdicts = [r1 <= scale, r2 <= scale, r3 <= scale];
    Ok(QDualReport {
        form1_residual: r1,
        form2_residual: r2,
        form3_residual: r3,
        form3_probe_residual: probe,
        verdicts,
        forms_spread: spread,
        certified: verdicts.iter().all(|&v| v),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceReading {
    /// `W̃_j = range(u_j* u_j π_{W_j})`
    Literal,
    /// `W̃_j = range(u_j*)`
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReadingAttempt {
    pub reading: SubspaceReading,
    pub residual: f64,
    /// `‖u − u·pinv(T̃*)·T̃*‖`; zero exactly when `ker T̃* ⊆ ker u`.
    pub well_definedness_residual: f64,
    pub dual_subspace_dims: Vec<usize>,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct QDualConstruction {
    /// The certified pair, or the last attempt when neither reading certifies.
    pub pair: QDualPair,
    pub reading: Option<SubspaceReading>,
    pub attempts: Vec<ReadingAttempt>,
    /// `u = pinv(T_Λ)·k`, a `D × n` matrix.
    pub u: CMatrix,
}

fn build_q_dual(
    system: &GFusionSystem,
    k: &BoundedOperator,
    u: &CMatrix,
    reading: SubspaceReading,
    tol: &ToleranceProfile,
) -> Result<(QDualPair, ReadingAttempt)> {
    let t = synthesis(system);
    let mut parts = Vec::with_capacity(system.len());
    for (j, m) in system.members().iter().enumerate() {
        let uj = t.block_rows(u, j);
        let span = match reading {
            SubspaceReading::Literal => uj.adjoint() * &uj * m.subspace.projection(),
            SubspaceReading::Fallback => uj.adjoint(),
        };
        let w = WeightedSubspace::spanned_by(&span, m.weight(), tol)?;
        parts.push((w, m.operator.matrix().clone()));
    }
    let dual = assemble(system, parts)?;
    let tt_adj = synthesis(&dual).analysis();
    let pinv_tt = pinv(&tt_adj, tol);
    let phi = u * &pinv_tt;
    let well = operator_norm(&(u - u * &pinv_tt * &tt_adj));
    let dims = dual.members().iter().map(|m| m.subspace.dim()).collect();
    let pair = QDualPair::new(system.clone(), dual, phi.adjoint(), k.clone())?;
    let report = verify_q_dual(&pair, tol)?;
    let attempt = ReadingAttempt {
        reading,
        residual: pair.residual,
        well_definedness_residual: well,
        dual_subspace_dims: dims,
        certified: report.certified,
    };
    Ok((pair, attempt))
}

/// Builds `(W̃_j, Λ_j, v_j)` with `Q = Φ*`, `Φ = u·pinv(T̃*)`, trying the
/// literal subspace reading first and the fallback second.
pub fn construct_q_dual(
    system: &GFusionSystem,
    k: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<QDualConstruction> {
    optimal_bounds(system, k, tol)?;
    let u = pinv(synthesis(system).matrix(), tol) * k.matrix();
    let mut attempts = Vec::new();
    let mut last = None;
    for reading in [SubspaceReading::Literal, SubspaceReading::Fallback] {
        let (pair, attempt) = build_q_dual(system, k, &u, reading, tol)?;
        let ok = attempt.certified;
        attempts.push(attempt);
        if ok {
            return Ok(QDualConstruction {
                pair,
                reading: Some(reading),
                attempts,
                u,
            });
        }
        last = Some(pair);
    }
    Ok(QDualConstruction {
        pair: last.expect("two readings attempted"),
        reading: None,
        attempts,
        u,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QDualBoundReport {
    /// Optimal bounds of the base for `k`.
    pub a_op: f64,
    pub b_op: f64,
    /// Optimal bounds of the dual for `k*`.
    pub c_op: f64,
    pub d_op: f64,
    pub q_norm: f64,
    /// `B_op⁻¹‖Q‖⁻²`
    pub c_predicted: f64,
    pub c_holds: bool,
    /// `A_op⁻¹‖Q‖⁻²`, evaluated only.
    pub d_predicted: f64,
    pub d_holds: bool,
    pub dual_is_frame: bool,
}

pub fn qdual_bound_corollary(pair: &QDualPair, tol: &ToleranceProfile) -> Result<QDualBoundReport> {
    if !pair.is_certified(tol) {
        return precondition(format!(
            "Q-dual pair is not certified (residual {:.3e})",
            pair.residual
        ));
    }
    let base = optimal_bounds(&pair.base, &pair.k, tol)?;
    let dual = verify_k_g_fusion(&pair.dual, &pair.k.adjoint(), None, tol)?;
    let q_norm = operator_norm(&pair.q);
    let inv = |x: f64| if x > 0.0 { 1.0 / x } else { f64::INFINITY };
    let c_predicted = inv(base.upper * q_norm * q_norm);
    let d_predicted = inv(base.lower * q_norm * q_norm);
    let c_op = dual.optimal.lower;
    let d_op = dual.optimal.upper;
    Ok(QDualBoundReport {
        a_op: base.lower,
        b_op: base.upper,
        c_op,
        d_op,
        q_norm,
        c_predicted,
        c_holds: dual.is_frame && c_op >= c_predicted - tol.at_scale(c_predicted),
        d_predicted,
        d_holds: d_op >= d_predicted - tol.at_scale(d_predicted),
        dual_is_frame: dual.is_frame,
    })
}

#[derive(Clone, Debug)]
pub struct KGFDualPair {
    pub base: GFusionSystem,
    pub dual: GFusionSystem,
    pub k: BoundedOperator,
    /// `‖k − Σ_j v_j² π_{W_j} Λ_j* Λ̃_j π_{W̃_j}‖`.
    pub residual: f64,
    /// `max_f ‖kf − Σ_j ...f‖ / (1 + ‖kf‖)` over the probes.
    pub probe_residual: f64,
}

impl KGFDualPair {
    pub fn new(base: GFusionSystem, dual: GFusionSystem, k: BoundedOperator) -> Result<Self> {
        k.ensure_dim(base.dim(), "k")?;
        same_index_set(&base, &dual)?;
        if base.local_dims() != dual.local_dims() {
            return input("base and dual local spaces differ");
        }
        let all: Vec<usize> = (0..base.len()).collect();
        let s = mixed_operator(&base, &dual, &all)?;
        let residual = operator_norm(&(k.matrix() - &s));
        let field = base.space().field.join(dual.space().field);
        let probe_residual = probes::probe_vectors(base.dim(), field, DUAL_PROBES, PROBE_SEED)
            .iter()
            .map(|f| {
                let kf = k.matrix() * f;
                let expanded = expand_d1(&base, &dual, f);
                (&kf - expanded).norm() / (1.0 + kf.norm())
            })
            .fold(0.0, f64::max);
        Ok(Self {
            base,
            dual,
            k,
            residual,
            probe_residual,
        })
    }

    pub fn is_certified(&self, tol: &ToleranceProfile) -> bool {
        self.residual <= tol.at_scale(self.k.norm())
    }

    fn ensure_certified(&self, tol: &ToleranceProfile) -> Result<()> {
        if !self.is_certified(tol) {
            return precondition(format!(
                "k-g-fusion dual pair is not certified (residual {:.3e})",
                self.residual
            ));
        }
        Ok(())
    }
}

/// `Σ_j v_j² π_{W_j} Λ_j* Λ̃_j π_{W̃_j} f`, evaluated vector by vector.
fn expand_d1(base: &GFusionSystem, dual: &GFusionSystem, f: &CVector) -> CVector {
    let mut out = CVector::zeros(base.dim());
    for (m, d) in base.members().iter().zip(dual.members()) {
        let coeff = d.analysis_block() * f;
        out += m.analysis_block().adjoint() * coeff * c(m.weight().powi(2));
    }
    out
}

/// `S_I = Σ_{j∈I} v_j² π_{W_j} Λ_j* Λ̃_j π_{W̃_j}`.
fn mixed_operator(base: &GFusionSystem, dual: &GFusionSystem, subset: &[usize]) -> Result<CMatrix> {
    let n = base.dim();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut s = CMatrix::zeros(n, n);
    for j in sorted {
        if j >= base.len() {
            return input(format!("index {j} out of range for {} members", base.len()));
        }
        let m = &base.members()[j];
        s += m.analysis_block().adjoint() * dual.members()[j].analysis_block() * c(m.weight().powi(2));
    }
    Ok(s)
}

/// `(k*XPπ_{W_j}(H), Λ_j π_{W_j} P X* k, v_j)` with `X` the restricted inverse
/// of `S_Λ` and `P` the projection onto `S_Λ(R(k))`.
pub fn canonical_dual(
    system: &GFusionSystem,
    k: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<KGFDualPair> {
    let ri = restricted_inverse(system, k, tol)?;
    let p = ri.image_projection();
    let kstar = k.matrix().adjoint();
    let xp = &ri.x * &p;
    let px_adj_k = &p * ri.x.adjoint() * k.matrix();
    let mut parts = Vec::with_capacity(system.len());
    for m in system.members() {
        let pi = m.subspace.projection();
        let w = WeightedSubspace::spanned_by(&(&kstar * &xp * &pi), m.weight(), tol)?;
        let op = m.operator.matrix() * &pi * &px_adj_k;
        parts.push((w, op));
    }
    let dual = assemble(system, parts)?;
    KGFDualPair::new(system.clone(), dual, k.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KGFDualReport {
    pub operator_residual: f64,
    pub probe_residual: f64,
    pub certified: bool,
    /// The dual checked as a `k*`-g-fusion frame.
    pub dual_frame: FrameReport,
    /// `B_Λ⁻¹`, the lower bound the dual inherits for `k*`.
    pub predicted_lower: f64,
    pub predicted_lower_holds: bool,
}

pub fn verify_kgf_dual(pair: &KGFDualPair, tol: &ToleranceProfile) -> Result<KGFDualReport> {
    let kstar = pair.k.adjoint();
    let dual_frame = verify_k_g_fusion(&pair.dual, &kstar, None, tol)?;
    let b = hermitian_eig(&frame_operator(&pair.base), tol)?.max();
    let predicted_lower = if b > 0.0 { 1.0 / b } else { f64::INFINITY };
    let holds = if predicted_lower.is_finite() {
        let s = frame_operator(&pair.dual);
        psd_check(&(s - kstar.gram() * c(predicted_lower)), tol)?
    } else {
        false
    };
    Ok(KGFDualReport {
        operator_residual: pair.residual,
        probe_residual: pair.probe_residual,
        certified: pair.is_certified(tol),
        dual_frame,
        predicted_lower,
        predicted_lower_holds: holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialOperator {
    pub index_set: Vec<usize>,
    #[serde(skip)]
    pub matrix: CMatrix,
}

pub fn partial_operator(pair: &KGFDualPair, subset: &[usize]) -> Result<PartialOperator> {
    let matrix = mixed_operator(&pair.base, &pair.dual, subset)?;
    let mut index_set = subset.to_vec();
    index_set.sort_unstable();
    index_set.dedup();
    Ok(PartialOperator { index_set, matrix })
}

/// `‖S_I + S_{I^c} − k‖`.
pub fn complement_residual(pair: &KGFDualPair, subset: &[usize]) -> Result<f64> {
    let s = partial_operator(pair, subset)?;
    let sc = partial_operator(pair, &probes::complement(pair.base.len(), &s.index_set))?;
    Ok(operator_norm(&(s.matrix + sc.matrix - pair.k.matrix())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub residual: f64,
    /// Sum of the magnitudes of the terms on both sides.
    pub scale: f64,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(lhs: C64, rhs: C64, scale: f64, tol: &ToleranceProfile) -> Self {
        let residual = (lhs - rhs).norm();
        Self {
            lhs: pair(lhs),
            rhs: pair(rhs),
            residual,
            scale,
            holds: residual <= tol.at_scale(scale),
        }
    }
}

fn check_probe(n: usize, f: &CVector) -> Result<()> {
    if f.len() != n {
        return input(format!("probe has dimension {}, expected {n}", f.len()));
    }
    Ok(())
}

fn check_subset(count: usize, subset: &[usize]) -> Result<()> {
    if let Some(&j) = subset.iter().find(|&&j| j >= count) {
        return input(format!("index {j} out of range for {count} members"));
    }
    Ok(())
}

/// `Σ_{I} v_j²⟨Λ̃_jπ̃_jf, Λ_jπ_jkf⟩ − ‖S_I f‖²` against
/// `Σ_{I^c} v_j² conj⟨Λ̃_jπ̃_jf, Λ_jπ_jkf⟩ − ‖S_{I^c} f‖²`.
pub fn check_identity_tg1(
    pair: &KGFDualPair,
    subset: &[usize],
    f: &CVector,
    tol: &ToleranceProfile,
) -> Result<IdentityCheck> {
    pair.ensure_certified(tol)?;
    check_probe(pair.base.dim(), f)?;
    check_subset(pair.base.len(), subset)?;
    let s_i = partial_operator(pair, subset)?;
    let complement = probes::complement(pair.base.len(), &s_i.index_set);
    let s_c = partial_operator(pair, &complement)?;
    let kf = pair.k.matrix() * f;
    let term = |j: usize| {
        let m = &pair.base.members()[j];
        let d = &pair.dual.members()[j];
        inner(&(d.analysis_block() * f), &(m.analysis_block() * &kf)) * c(m.weight().powi(2))
    };
    let sum_i: C64 = s_i.index_set.iter().map(|&j| term(j)).sum();
    let sum_c: C64 = complement.iter().map(|&j| term(j).conj()).sum();
    let ni = (&s_i.matrix * f).norm_squared();
    let nc = (&s_c.matrix * f).norm_squared();
    let lhs = sum_i - c(ni);
    let rhs = sum_c - c(nc);
    Ok(IdentityCheck::new(lhs, rhs, sum_i.norm() + sum_c.norm() + ni + nc, tol))
}

fn ensure_parseval(system: &GFusionSystem, k: &BoundedOperator, tol: &ToleranceProfile) -> Result<()> {
    let r = verify_k_g_fusion(system, k, None, tol)?;
    if !r.is_parseval {
        return precondition(format!(
            "system is not Parseval for k (‖S − kk*‖ = {:.3e})",
            r.parseval_residual
        ));
    }
    Ok(())
}

/// `Re Σ_{j∈I} v_j²⟨Λ_jπ_jf, Λ_jπ_j kk*f⟩`, summed in index order.
fn cross_sum(system: &GFusionSystem, subset: &[usize], f: &CVector, kkf: &CVector) -> C64 {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted
        .iter()
        .map(|&j| {
            let m = &system.members()[j];
            let a = m.analysis_block();
            inner(&(&a * f), &(&a * kkf)) * c(m.weight().powi(2))
        })
        .sum()
}

/// `‖S_{I∪E}f‖² − ‖S_{I^c∖E}f‖²` against
/// `‖S_I f‖² − ‖S_{I^c}f‖² + 2 Re Σ_{j∈E} v_j²⟨Λ_jπ_jf, Λ_jπ_jkk*f⟩`.
pub fn check_identity_ti1(
    system: &GFusionSystem,
    k: &BoundedOperator,
    subset: &[usize],
    extra: &[usize],
    f: &CVector,
    tol: &ToleranceProfile,
) -> Result<IdentityCheck> {
    check_probe(system.dim(), f)?;
    check_subset(system.len(), subset)?;
    check_subset(system.len(), extra)?;
    if extra.iter().any(|j| subset.contains(j)) {
        return input("E must lie in the complement of I");
    }
    ensure_parseval(system, k, tol)?;
    let count = system.len();
    let union: Vec<usize> = subset.iter().chain(extra).copied().collect();
    let sq = |set: &[usize]| -> Result<f64> { Ok((partial_frame_operator(system, set)? * f).norm_squared()) };
    let a = sq(&union)?;
    let b = sq(&probes::complement(count, &union))?;
    let ci = sq(subset)?;
    let cc = sq(&probes::complement(count, subset))?;
    let kkf = k.gram() * f;
    let cross = 2.0 * cross_sum(system, extra, f, &kkf).re;
    let lhs = a - b;
    let rhs = ci - cc + cross;
    Ok(IdentityCheck::new(c(lhs), c(rhs), a + b + ci + cc + cross.abs(), tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThreeQuartersCheck {
    /// `‖S_{Λ,I}f‖² + Re Σ_{I^c} v_j²⟨Λ_jπ_jf, Λ_jπ_jkk*f⟩`
    pub lhs: f64,
    /// The same with `I` and `I^c` exchanged.
    pub rhs: f64,
    /// `(3/4)‖kk*f‖²`
    pub lower: f64,
    pub equality_residual: f64,
    pub slack: f64,
    pub holds: bool,
}

pub fn check_three_quarters(
    system: &GFusionSystem,
    k: &BoundedOperator,
    subset: &[usize],
    f: &CVector,
    tol: &ToleranceProfile,
) -> Result<ThreeQuartersCheck> {
    check_probe(system.dim(), f)?;
    check_subset(system.len(), subset)?;
    ensure_parseval(system, k, tol)?;
    let complement = probes::complement(system.len(), subset);
    let kkf = k.gram() * f;
    let ni = (partial_frame_operator(system, subset)? * f).norm_squared();
    let nc = (partial_frame_operator(system, &complement)? * f).norm_squared();
    let lhs = ni + cross_sum(system, &complement, f, &kkf).re;
    let rhs = nc + cross_sum(system, subset, f, &kkf).re;
    let lower = 0.75 * kkf.norm_squared();
    let scale = tol.at_scale(kkf.norm_squared().max(lhs.abs()));
    let equality_residual = (lhs - rhs).abs();
    let slack = lhs - lower;
    Ok(ThreeQuartersCheck {
        lhs,
        rhs,
        lower,
        equality_residual,
        slack,
        holds: equality_residual <= scale && slack >= -scale,
    })
}

/// A Parseval system on `ℝ²` where the 3/4 bound is attained: two copies of
/// `(ℝ², I₂, 1/√2)`, `k = I`, `I = {0}`, `f = (1,1)/√2`.
pub fn three_quarters_extremal() -> (GFusionSystem, BoundedOperator, Vec<usize>, CVector) {
    let w = std::f64::consts::FRAC_1_SQRT_2;
    let member = || Member {
        subspace: WeightedSubspace::full(2, w).expect("positive weight"),
        operator: LocalOperator::new(identity(2)).expect("finite"),
    };
    let system = GFusionSystem::new(HilbertSpace::real(2).expect("dim > 0"), vec![member(), member()])
        .expect("valid system");
    (system, BoundedOperator::identity(2), vec![0], real_vector(&[w, w]))
}
