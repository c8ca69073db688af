//! Perturbation of the local operators `Λ_j → Θ_j`: the invertibility lemma,
//! falsification of the perturbation hypotheses and comparison of measured
//! bounds with the predicted ones.
//!
//! The hypotheses quantify over every subset `I` and every `f`; they are
//! searched for counterexamples, so a negative verdict means "not falsified".

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, FrameError, Result};
use crate::frame_ops::{optimal_bounds, verify_k_g_fusion, FrameBounds, FrameReport};
use crate::model::{BoundedOperator, Field, GFusionSystem, LocalOperator};
use crate::numerics::{c, identity, inner, operator_norm, CMatrix, CVector, Svd, ToleranceProfile, C64};
use crate::probes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PerturbationMode {
    /// Subset hypothesis with `γ(Σ_I v_j²‖Λ_jπ_jf‖²)^{1/2}`.
    #[serde(rename = "P1-sqrt-sum")]
    P1SqrtSum,
    /// Subset hypothesis with `γ‖k*f‖`.
    #[serde(rename = "P-variant-kstar")]
    PVariantKstar,
    /// `Σ_J v_j²‖π_j(Λ_j*Λ_j − Θ_j*Θ_j)π_jf‖ ≤ R‖k*f‖`.
    #[serde(rename = "C-p2-normsum")]
    CP2NormSum,
    /// `Σ_J v_j²‖(Λ_j − Θ_j)π_jf‖² ≤ R‖k*f‖²`.
    #[serde(rename = "T-sqsum")]
    TSqSum,
}

impl PerturbationMode {
    pub const ALL: [PerturbationMode; 4] = [
        PerturbationMode::P1SqrtSum,
        PerturbationMode::PVariantKstar,
        PerturbationMode::CP2NormSum,
        PerturbationMode::TSqSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PerturbationMode::P1SqrtSum => "P1-sqrt-sum",
            PerturbationMode::PVariantKstar => "P-variant-kstar",
            PerturbationMode::CP2NormSum => "C-p2-normsum",
            PerturbationMode::TSqSum => "T-sqsum",
        }
    }

    fn over_subsets(self) -> bool {
        matches!(self, PerturbationMode::P1SqrtSum | PerturbationMode::PVariantKstar)
    }
}

impl fmt::Display for PerturbationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbationMode {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                FrameError::Input(format!(
                    "unknown mode {s} (expected P1-sqrt-sum, P-variant-kstar, C-p2-normsum or T-sqsum)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub mode: PerturbationMode,
}

impl PerturbationParams {
    pub fn zero(mode: PerturbationMode) -> Self {
        Self {
            lambda1: 0.0,
            lambda2: 0.0,
            gamma: 0.0,
            r: 0.0,
            mode,
        }
    }

    pub fn with_r(mode: PerturbationMode, r: f64) -> Self {
        Self { r, ..Self::zero(mode) }
    }

    /// Ranges that do not depend on the base frame.
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !(x.is_finite() && (0.0..1.0).contains(&x)) {
                return input(format!("{name} must lie in [0, 1), got {x}"));
            }
        }
        for (name, x) in [("gamma", self.gamma), ("R", self.r)] {
            if !(x.is_finite() && x >= 0.0) {
                return input(format!("{name} must be finite and non-negative, got {x}"));
            }
        }
        Ok(())
    }

    /// Mode-specific admissibility for a base frame with lower bound `a`.
    /// The variant mode uses the printed condition `λ₁ + γ/(√A‖k‖) < 1`.
    pub fn admissible(&self, a: f64, k_norm: f64) -> bool {
        match self.mode {
            PerturbationMode::P1SqrtSum => {
                (self.lambda1 + self.gamma / a.sqrt()).max(self.lambda2) < 1.0
            }
            PerturbationMode::PVariantKstar => {
                k_norm > 0.0 && (self.lambda1 + self.gamma / (a.sqrt() * k_norm)).max(self.lambda2) < 1.0
            }
            PerturbationMode::CP2NormSum | PerturbationMode::TSqSum => self.r < a,
        }
    }

    /// The variant mode with the condition `λ₁ + γ‖k‖/√A < 1` matching its bounds.
    pub fn admissible_bound_reading(&self, a: f64, k_norm: f64) -> bool {
        (self.lambda1 + self.gamma * k_norm / a.sqrt()).max(self.lambda2) < 1.0
    }
}

/// Bounds for `Θ` as stated for each mode.
pub fn predicted_bounds(params: &PerturbationParams, a: f64, b: f64, k_norm: f64) -> Result<FrameBounds> {
    params.validate()?;
    if !(a > 0.0 && a.is_finite() && b >= a.min(b) && b.is_finite()) {
        return input(format!("base bounds must satisfy 0 < A < ∞ and B finite, got ({a}, {b})"));
    }
    if !params.admissible(a, k_norm) {
        return input(format!("parameters are not admissible for mode {}", params.mode));
    }
    let PerturbationParams {
        lambda1: l1,
        lambda2: l2,
        gamma: g,
        r,
        ..
    } = *params;
    Ok(match params.mode {
        PerturbationMode::P1SqrtSum => FrameBounds::new(
            a * (1.0 - (l1 + g / a.sqrt())) / (1.0 + l2),
            b * (1.0 + l1 + g / b.sqrt()) / (1.0 - l2),
        ),
        PerturbationMode::PVariantKstar => FrameBounds::new(
            a * (1.0 - (l1 + g / a.sqrt() * k_norm)) / (1.0 + l2),
            b * (1.0 + l1 + g / b.sqrt() * k_norm) / (1.0 - l2),
        ),
        PerturbationMode::CP2NormSum => FrameBounds::new(
            a - r,
            (b + r * (b / a).sqrt()).min(r * k_norm + b.sqrt()),
        ),
        PerturbationMode::TSqSum => FrameBounds::new(
            (a.sqrt() - r.sqrt()).powi(2),
            (k_norm * r.sqrt() + b.sqrt()).powi(2),
        ),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaVerdict {
    Certified,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PaleyWienerReport {
    pub verdict: LemmaVerdict,
    /// `‖I − U‖`
    pub distance: f64,
    /// `λ₁ + λ₂·σ_min(U)`
    pub allowance: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `[(1−λ₁)/(1+λ₂), (1+λ₁)/(1−λ₂)]`
    pub predicted: FrameBounds,
    pub inverse_sigma_min: Option<f64>,
    pub inverse_sigma_max: Option<f64>,
    /// `[(1−λ₂)/(1+λ₁), (1+λ₂)/(1−λ₁)]`
    pub inverse_predicted: FrameBounds,
    /// Both spectral enclosures, when the hypothesis is certified.
    pub conclusion_holds: Option<bool>,
}

/// Certifies `‖x − Ux‖ ≤ λ₁‖x‖ + λ₂‖Ux‖` through `‖I − U‖ ≤ λ₁ + λ₂σ_min(U)`
/// and checks the resulting singular value enclosures for `U` and `U⁻¹`.
pub fn paley_wiener_check(u: &CMatrix, lambda1: f64, lambda2: f64, tol: &ToleranceProfile) -> Result<PaleyWienerReport> {
    for (name, x) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if !(x.is_finite() && (0.0..1.0).contains(&x)) {
            return input(format!("{name} must lie in [0, 1), got {x}"));
        }
    }
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return input(format!("U must be square, got {}x{}", u.nrows(), u.ncols()));
    }
    crate::numerics::ensure_finite(u, "U")?;
    let n = u.nrows();
    let svd = Svd::new(u);
    let (smin, smax) = (svd.sigma_min(), svd.sigma_max());
    let distance = operator_norm(&(identity(n) - u));
    let allowance = lambda1 + lambda2 * smin;
    let predicted = FrameBounds::new((1.0 - lambda1) / (1.0 + lambda2), (1.0 + lambda1) / (1.0 - lambda2));
    let inverse_predicted = FrameBounds::new((1.0 - lambda2) / (1.0 + lambda1), (1.0 + lambda2) / (1.0 - lambda1));
    let certified = distance <= allowance + tol.at_scale(1.0);

    let mut report = PaleyWienerReport {
        verdict: if certified { LemmaVerdict::Certified } else { LemmaVerdict::Inconclusive },
        distance,
        allowance,
        sigma_min: smin,
        sigma_max: smax,
        predicted,
        inverse_sigma_min: None,
        inverse_sigma_max: None,
        inverse_predicted,
        conclusion_holds: None,
    };
    if !certified {
        return Ok(report);
    }
    let inv = u
        .clone()
        .try_inverse()
        .ok_or_else(|| FrameError::Internal("certified U is not invertible".into()))?;
    let inv_svd = Svd::new(&inv);
    report.inverse_sigma_min = Some(inv_svd.sigma_min());
    report.inverse_sigma_max = Some(inv_svd.sigma_max());
    let within = |x: f64, b: &FrameBounds| {
        x >= b.lower - tol.at_scale(b.lower) && x <= b.upper + tol.at_scale(b.upper)
    };
    report.conclusion_holds = Some(
        within(smin, &predicted)
            && within(smax, &predicted)
            && within(inv_svd.sigma_min(), &inverse_predicted)
            && within(inv_svd.sigma_max(), &inverse_predicted),
    );
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisVerdict {
    pub falsified: bool,
    /// Largest `lhs − rhs` found over unit `f`.
    pub worst_violation: f64,
    pub subsets_tested: usize,
    pub probes_tested: usize,
    pub worst_subset: Vec<usize>,
}

pub const EXHAUSTIVE_SUBSETS: usize = 12;
pub const SAMPLED_SUBSETS: usize = 512;
pub const RANDOM_PROBES: usize = 200;
const PROBE_SEED: u64 = 0x9e7;
const SUBSET_SEED: u64 = 0x5b5;
const REFINE_STEPS: usize = 200;

/// Per-member pieces of both families.
struct Pieces {
    /// `v_j² π_j Λ_j* Λ_j π_j`
    lam: Vec<CMatrix>,
    /// `v_j² π_j Θ_j* Θ_j π_j`
    theta: Vec<CMatrix>,
    /// `v_j (Λ_j − Θ_j) π_j`
    diff: Vec<CMatrix>,
    kstar: CMatrix,
}

impl Pieces {
    fn new(base: &GFusionSystem, theta: &[LocalOperator], k: &BoundedOperator) -> Self {
        let mut lam = Vec::new();
        let mut th = Vec::new();
        let mut diff = Vec::new();
        for (m, t) in base.members().iter().zip(theta) {
            let p = m.subspace.projection();
            let w = m.weight();
            let a = m.operator.matrix() * &p;
            let b = t.matrix() * &p;
            lam.push(a.adjoint() * &a * c(w * w));
            th.push(b.adjoint() * &b * c(w * w));
            diff.push((a - b) * c(w));
        }
        Self {
            lam,
            theta: th,
            diff,
            kstar: k.matrix().adjoint(),
        }
    }

    fn sum(mats: &[CMatrix], subset: &[usize], n: usize) -> CMatrix {
        subset.iter().fold(CMatrix::zeros(n, n), |acc, &j| acc + &mats[j])
    }
}

/// `(lhs, rhs)` of one hypothesis instance at `f`.
type Sides = Box<dyn Fn(&CVector) -> (f64, f64)>;

fn instance(pieces: &Pieces, params: &PerturbationParams, subset: &[usize], n: usize) -> Sides {
    let kstar = pieces.kstar.clone();
    let p = *params;
    match params.mode {
        PerturbationMode::P1SqrtSum | PerturbationMode::PVariantKstar => {
            let sl = Pieces::sum(&pieces.lam, subset, n);
            let st = Pieces::sum(&pieces.theta, subset, n);
            let d = &sl - &st;
            Box::new(move |f| {
                let slf = &sl * f;
                let lhs = (&d * f).norm();
                let extra = match p.mode {
                    PerturbationMode::P1SqrtSum => inner(&slf, f).re.max(0.0).sqrt(),
                    _ => (&kstar * f).norm(),
                };
                let rhs = p.lambda1 * slf.norm() + p.lambda2 * (&st * f).norm() + p.gamma * extra;
                (lhs, rhs)
            })
        }
        PerturbationMode::CP2NormSum => {
            let d: Vec<CMatrix> = pieces.lam.iter().zip(&pieces.theta).map(|(a, b)| a - b).collect();
            Box::new(move |f| {
                let lhs = d.iter().map(|m| (m * f).norm()).sum();
                (lhs, p.r * (&kstar * f).norm())
            })
        }
        PerturbationMode::TSqSum => {
            let d = pieces.diff.clone();
            Box::new(move |f| {
                let lhs = d.iter().map(|m| (m * f).norm_squared()).sum();
                (lhs, p.r * (&kstar * f).norm_squared())
            })
        }
    }
}

fn violation(sides: &Sides, f: &CVector) -> f64 {
    let (l, r) = sides(f);
    l - r
}

/// Coordinates of `f` as a real vector, real parts then imaginary parts.
fn unpack(f: &CVector, field: Field) -> Vec<f64> {
    let mut x: Vec<f64> = f.iter().map(|z| z.re).collect();
    if field == Field::Complex {
        x.extend(f.iter().map(|z| z.im));
    }
    x
}

fn pack(x: &[f64], n: usize, field: Field) -> CVector {
    let v = CVector::from_fn(n, |i, _| {
        C64::new(x[i], if field == Field::Complex { x[n + i] } else { 0.0 })
    });
    let norm = v.norm();
    if norm > 0.0 { v / c(norm) } else { v }
}

/// Finite-difference ascent of the violation on the unit sphere.
fn refine(sides: &Sides, start: &CVector, field: Field) -> (CVector, f64) {
    let n = start.len();
    let mut x = unpack(start, field);
    let mut best = violation(sides, start);
    let mut step = 0.1;
    let h = 1e-7;
    for _ in 0..REFINE_STEPS {
        if step < 1e-12 {
            break;
        }
        let grad: Vec<f64> = (0..x.len())
            .map(|i| {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                (violation(sides, &pack(&xp, n, field)) - violation(sides, &pack(&xm, n, field))) / (2.0 * h)
            })
            .collect();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            break;
        }
        let cand: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + step * g / gnorm).collect();
        let v = violation(sides, &pack(&cand, n, field));
        if v > best {
            best = v;
            x = unpack(&pack(&cand, n, field), field);
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    (pack(&x, n, field), best)
}

fn check_theta(base: &GFusionSystem, theta: &[LocalOperator]) -> Result<()> {
    if theta.len() != base.len() {
        return input(format!("expected {} perturbed operators, got {}", base.len(), theta.len()));
    }
    for (j, (m, t)) in base.members().iter().zip(theta).enumerate() {
        if t.matrix().shape() != m.operator.matrix().shape() {
            let (r, c) = t.matrix().shape();
            let (er, ec) = m.operator.matrix().shape();
            return input(format!("Θ_{j} is {r}x{c}, expected {er}x{ec}"));
        }
    }
    Ok(())
}

/// Searches for `(I, f)` violating the mode's hypothesis.
pub fn perturb_hypothesis(
    base: &GFusionSystem,
    theta: &[LocalOperator],
    k: &BoundedOperator,
    params: &PerturbationParams,
    tol: &ToleranceProfile,
) -> Result<HypothesisVerdict> {
    params.validate()?;
    check_theta(base, theta)?;
    k.ensure_dim(base.dim(), "k")?;
    let n = base.dim();
    let field = theta
        .iter()
        .fold(base.space().field.join(Field::of(k.matrix())), |f, t| f.join(Field::of(t.matrix())));
    let pieces = Pieces::new(base, theta, k);
    let subsets = if params.mode.over_subsets() {
        probes::subsets(base.len(), EXHAUSTIVE_SUBSETS, SAMPLED_SUBSETS, SUBSET_SEED)
    } else {
        vec![(0..base.len()).collect()]
    };
    let fs = probes::probe_vectors(n, field, RANDOM_PROBES, PROBE_SEED);

    let mut worst = (f64::NEG_INFINITY, 0usize, 0usize);
    for (si, subset) in subsets.iter().enumerate() {
        let sides = instance(&pieces, params, subset, n);
        for (fi, f) in fs.iter().enumerate() {
            let v = violation(&sides, f);
            if v > worst.0 {
                worst = (v, si, fi);
            }
        }
    }
    let sides = instance(&pieces, params, &subsets[worst.1], n);
    let (f, refined) = refine(&sides, &fs[worst.2], field);
    let worst_violation = refined.max(worst.0);
    let (l, r) = sides(&f);
    let falsified = worst_violation > tol.at_scale(l.max(r));
    Ok(HypothesisVerdict {
        falsified,
        worst_violation,
        subsets_tested: subsets.len(),
        probes_tested: fs.len() + 1,
        worst_subset: subsets[worst.1].clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErratumRecord {
    pub mode: PerturbationMode,
    pub bound: &'static str,
    pub predicted: f64,
    pub measured: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VariantReadings {
    /// `λ₁ + γ/(√A‖k‖) < 1`
    pub printed_admissible: bool,
    /// `λ₁ + γ‖k‖/√A < 1`
    pub bound_admissible: bool,
    /// Measured bounds of `Θ` lie within the predicted ones.
    pub containment_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub params: PerturbationParams,
    pub hypothesis: HypothesisVerdict,
    pub base_bounds: FrameBounds,
    pub theta: FrameReport,
    pub predicted: FrameBounds,
    pub lower_contained: bool,
    pub upper_contained: bool,
    /// Containment is asserted only for `T-sqsum`.
    pub containment_asserted: bool,
    pub variant_readings: Option<VariantReadings>,
    pub errata: Vec<ErratumRecord>,
}

impl PerturbationReport {
    pub fn passed(&self) -> bool {
        self.theta.is_frame
            && (!self.containment_asserted || (self.lower_contained && self.upper_contained))
    }
}

pub fn verify_perturbation_theorem(
    base: &GFusionSystem,
    theta: &[LocalOperator],
    k: &BoundedOperator,
    params: &PerturbationParams,
    tol: &ToleranceProfile,
) -> Result<PerturbationReport> {
    let base_bounds = optimal_bounds(base, k, tol)?;
    let hypothesis = perturb_hypothesis(base, theta, k, params, tol)?;
    if hypothesis.falsified {
        return precondition(format!(
            "hypothesis of {} falsified (violation {:.6e} on subset {:?})",
            params.mode, hypothesis.worst_violation, hypothesis.worst_subset
        ));
    }
    let k_norm = k.norm();
    let predicted = predicted_bounds(params, base_bounds.lower, base_bounds.upper, k_norm)?;
    let theta_system = base.with_operators(theta.to_vec())?;
    let report = verify_k_g_fusion(&theta_system, k, None, tol)?;
    let measured = report.optimal;
    let lower_contained = report.is_frame && predicted.lower <= measured.lower + tol.at_scale(measured.lower);
    let upper_contained = measured.upper <= predicted.upper + tol.at_scale(predicted.upper);
    let asserted = params.mode == PerturbationMode::TSqSum;

    let mut errata = Vec::new();
    if !asserted {
        if !lower_contained {
            errata.push(ErratumRecord {
                mode: params.mode,
                bound: "lower",
                predicted: predicted.lower,
                measured: measured.lower,
            });
        }
        if !upper_contained {
            errata.push(ErratumRecord {
                mode: params.mode,
                bound: "upper",
                predicted: predicted.upper,
                measured: measured.upper,
            });
        }
    }
    let variant_readings = (params.mode == PerturbationMode::PVariantKstar).then(|| VariantReadings {
        printed_admissible: params.admissible(base_bounds.lower, k_norm),
        bound_admissible: params.admissible_bound_reading(base_bounds.lower, k_norm),
        containment_holds: lower_contained && upper_contained,
    });

    Ok(PerturbationReport {
        params: *params,
        hypothesis,
        base_bounds,
        theta: report,
        predicted,
        lower_contained,
        upper_contained,
        containment_asserted: asserted,
        variant_readings,
        errata,
    })
}

/// `Θ_j = c·Λ_j`.
pub fn scaled_operators(base: &GFusionSystem, factor: f64) -> Vec<LocalOperator> {
    base.members().iter().map(|m| m.operator.scaled(factor)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixture_a, fixture_i};
    use crate::numerics::real_diag;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn mode_names_round_trip() {
        for m in PerturbationMode::ALL {
            assert_eq!(m.name().parse::<PerturbationMode>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("P2".parse::<PerturbationMode>().is_err());
    }

    #[test]
    fn lemma_examples() {
        let r = paley_wiener_check(&(identity(2) * c(0.5)), 0.5, 0.0, &tol()).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Certified);
        assert!((r.sigma_min - 0.5).abs() < 1e-15);
        assert_eq!(r.conclusion_holds, Some(true));

        let r = paley_wiener_check(&identity(3), 0.0, 0.0, &tol()).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Certified);
        assert_eq!((r.predicted.lower, r.predicted.upper), (1.0, 1.0));
        assert_eq!(r.conclusion_holds, Some(true));

        let r = paley_wiener_check(&real_diag(&[0.9, 1.1]), 0.1, 0.0, &tol()).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Certified);
        assert_eq!(r.conclusion_holds, Some(true));

        let r = paley_wiener_check(&real_diag(&[0.5, 1.5]), 0.1, 0.1, &tol()).unwrap();
        assert_eq!(r.verdict, LemmaVerdict::Inconclusive);
        assert!(r.conclusion_holds.is_none());

        assert!(paley_wiener_check(&identity(2), 1.0, 0.0, &tol()).is_err());
    }

    #[test]
    fn predicted_bound_examples() {
        let b = predicted_bounds(&PerturbationParams::with_r(PerturbationMode::TSqSum, 0.01), 1.0, 1.0, 1.0).unwrap();
        assert!((b.lower - 0.81).abs() < 1e-15 && (b.upper - 1.21).abs() < 1e-15);
        let b = predicted_bounds(&PerturbationParams::zero(PerturbationMode::P1SqrtSum), 0.5, 2.0, 1.0).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 2.0));
        let b = predicted_bounds(&PerturbationParams::with_r(PerturbationMode::CP2NormSum, 0.21), 1.0, 1.0, 1.0).unwrap();
        assert!((b.lower - 0.79).abs() < 1e-15 && (b.upper - 1.21).abs() < 1e-15);
        assert!(predicted_bounds(&PerturbationParams::with_r(PerturbationMode::TSqSum, 1.0), 1.0, 1.0, 1.0).is_err());
        let mut p = PerturbationParams::zero(PerturbationMode::P1SqrtSum);
        p.gamma = 1.0;
        assert!(predicted_bounds(&p, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_perturbation_is_never_falsified() {
        let fx = fixture_a();
        let k = fx.operator("k").unwrap();
        let theta = scaled_operators(&fx.system, 1.0);
        for mode in PerturbationMode::ALL {
            let p = PerturbationParams::zero(mode);
            let v = perturb_hypothesis(&fx.system, &theta, k, &p, &tol()).unwrap();
            assert!(!v.falsified, "{mode}");
            assert_eq!(v.worst_violation, 0.0);
            let r = verify_perturbation_theorem(&fx.system, &theta, k, &p, &tol()).unwrap();
            assert!(r.passed() && r.errata.is_empty());
            assert!((r.predicted.lower - r.base_bounds.lower).abs() < 1e-12);
        }
    }

    #[test]
    fn c_p2_threshold_on_fixture_i() {
        // lhs = 0.21(|f₁| + |f₂|), which reaches 0.21·√2 at f = (1,1)/√2
        let fx = fixture_i();
        let k = fx.operator("k").unwrap();
        let theta = scaled_operators(&fx.system, 1.1);
        let boundary = 0.21 * std::f64::consts::SQRT_2;
        let verdict = |r: f64| {
            perturb_hypothesis(&fx.system, &theta, k, &PerturbationParams::with_r(PerturbationMode::CP2NormSum, r), &tol())
                .unwrap()
        };
        assert!(!verdict(boundary + 1e-12).falsified);
        let v = verdict(0.21);
        assert!(v.falsified);
        assert!((v.worst_violation - (boundary - 0.21)).abs() < 1e-9);
        let v = verdict(0.20);
        assert!((v.worst_violation - (boundary - 0.20)).abs() < 1e-9);
    }

    #[test]
    fn t_sqsum_scaling_attains_upper_bound() {
        let fx = fixture_i();
        let k = fx.operator("k").unwrap();
        let theta = scaled_operators(&fx.system, 1.1);
        let p = PerturbationParams::with_r(PerturbationMode::TSqSum, (1.1f64 - 1.0).powi(2));
        let r = verify_perturbation_theorem(&fx.system, &theta, k, &p, &tol()).unwrap();
        assert!(r.passed());
        assert!((r.theta.optimal.lower - 1.21).abs() < 1e-12);
        assert!((r.theta.optimal.upper - r.predicted.upper).abs() < 1e-12);
        assert!((r.predicted.lower - 0.81).abs() < 1e-12);
    }

    #[test]
    fn falsified_hypothesis_blocks_theorem() {
        let fx = fixture_i();
        let theta = scaled_operators(&fx.system, 1.1);
        let p = PerturbationParams::with_r(PerturbationMode::TSqSum, 0.005);
        let r = verify_perturbation_theorem(&fx.system, &theta, fx.operator("k").unwrap(), &p, &tol());
        assert!(matches!(r, Err(FrameError::Precondition(_))));
    }

    #[test]
    fn p1_threshold_on_fixture_i() {
        // lhs = |1 − c²|‖P_I f‖, rhs = (λ₁ + λ₂c² + γ)‖P_I f‖
        let fx = fixture_i();
        let k = fx.operator("k").unwrap();
        let theta = scaled_operators(&fx.system, 1.1);
        let mut p = PerturbationParams::zero(PerturbationMode::P1SqrtSum);
        p.lambda1 = 0.1;
        p.gamma = 0.11 + 1e-12;
        assert!(!perturb_hypothesis(&fx.system, &theta, k, &p, &tol()).unwrap().falsified);
        p.gamma = 0.10;
        let v = perturb_hypothesis(&fx.system, &theta, k, &p, &tol()).unwrap();
        assert!(v.falsified && (v.worst_violation - 0.01).abs() < 1e-9);
        assert_eq!(v.subsets_tested, 4);
    }

    #[test]
    fn theta_shape_is_checked() {
        let fx = fixture_i();
        let bad = vec![LocalOperator::new(CMatrix::zeros(2, 2)).unwrap(); 2];
        let p = PerturbationParams::zero(PerturbationMode::TSqSum);
        assert!(perturb_hypothesis(&fx.system, &bad, fx.operator("k").unwrap(), &p, &tol()).is_err());
    }
}
