//! Finite-dimensional Hilbert spaces, weighted subspaces, local operators and
//! g-fusion systems.
//!
//! A local space `H_j` is represented as coordinate space of dimension `d_j`,
//! so a local operator `Λ_j: H → H_j` is a `d_j × n` matrix. Subspaces are
//! kept as orthonormal bases (`n × m_j`), never as projectors.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, FrameError, Result};
use crate::numerics::{
    c, ensure_finite, identity, is_finite, operator_norm, orthonormalize, CMatrix, CVector, Svd,
    ToleranceProfile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// `Complex` wins when two fields meet in one computation.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    /// The smallest field that can hold every entry of `m` exactly.
    pub fn of(m: &CMatrix) -> Field {
        if m.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    pub field: Field,
    pub dim: usize,
}

impl HilbertSpace {
    pub fn new(field: Field, dim: usize) -> Result<Self> {
        if dim == 0 {
            return input("Hilbert space dimension must be positive");
        }
        Ok(Self { field, dim })
    }

    pub fn real(dim: usize) -> Result<Self> {
        Self::new(Field::Real, dim)
    }
}

/// Closed subspace `W_j` with weight `v_j > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSubspace {
    basis: CMatrix,
    weight: f64,
}

impl WeightedSubspace {
    /// Takes an orthonormal basis as-is (checked within `tol`).
    pub fn new(basis: CMatrix, weight: f64, tol: &ToleranceProfile) -> Result<Self> {
        ensure_finite(&basis, "subspace basis")?;
        check_weight(weight)?;
        let gram = basis.adjoint() * &basis;
        let defect = operator_norm(&(gram - identity(basis.ncols())));
        if defect > tol.at_scale(1.0) {
            return input(format!(
                "subspace basis is not orthonormal (‖Q*Q − I‖ = {defect:.3e})"
            ));
        }
        Ok(Self { basis, weight })
    }

    /// Orthonormalizes arbitrary spanning vectors (columns) first.
    pub fn spanned_by(vectors: &CMatrix, weight: f64, tol: &ToleranceProfile) -> Result<Self> {
        ensure_finite(vectors, "spanning vectors")?;
        check_weight(weight)?;
        Ok(Self {
            basis: orthonormalize(vectors, tol),
            weight,
        })
    }

    /// Keeps `vectors` when they are already orthonormal, otherwise orthonormalizes.
    pub fn from_vectors(vectors: CMatrix, weight: f64, tol: &ToleranceProfile) -> Result<Self> {
        match Self::new(vectors.clone(), weight, tol) {
            Ok(w) => Ok(w),
            Err(FrameError::Input(msg)) if msg.contains("orthonormal") => {
                Self::spanned_by(&vectors, weight, tol)
            }
            Err(e) => Err(e),
        }
    }

    pub fn full(dim: usize, weight: f64) -> Result<Self> {
        check_weight(weight)?;
        Ok(Self {
            basis: identity(dim),
            weight,
        })
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn with_weight(&self, weight: f64) -> Result<Self> {
        check_weight(weight)?;
        Ok(Self {
            basis: self.basis.clone(),
            weight,
        })
    }

    /// `π_W = Q Q*`.
    pub fn projection(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if !(weight.is_finite() && weight > 0.0) {
        return input(format!("weights must be finite and positive, got {weight}"));
    }
    Ok(())
}

/// `Λ_j: H → H_j` as a `d_j × n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    matrix: CMatrix,
}

impl LocalOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        ensure_finite(&matrix, "local operator")?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn local_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * c(factor),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub subspace: WeightedSubspace,
    pub operator: LocalOperator,
}

impl Member {
    pub fn weight(&self) -> f64 {
        self.subspace.weight()
    }

    /// `Λ_j π_{W_j}`, the unweighted analysis block.
    pub fn analysis_block(&self) -> CMatrix {
        self.operator.matrix() * self.subspace.projection()
    }
}

/// The triple `(W_j, Λ_j, v_j)` over a finite, nonempty index set.
#[derive(Clone, Debug, PartialEq)]
pub struct GFusionSystem {
    space: HilbertSpace,
    members: Vec<Member>,
}

impl GFusionSystem {
    pub fn new(space: HilbertSpace, members: Vec<Member>) -> Result<Self> {
        if members.is_empty() {
            return input("a g-fusion system needs at least one member");
        }
        for (j, m) in members.iter().enumerate() {
            if m.subspace.ambient_dim() != space.dim {
                return input(format!(
                    "member {j}: subspace lives in dimension {}, expected {}",
                    m.subspace.ambient_dim(),
                    space.dim
                ));
            }
            if m.operator.matrix().ncols() != space.dim {
                return input(format!(
                    "member {j}: local operator has {} columns, expected {}",
                    m.operator.matrix().ncols(),
                    space.dim
                ));
            }
        }
        Ok(Self { space, members })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn local_dims(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.operator.local_dim()).collect()
    }

    pub fn total_local_dim(&self) -> usize {
        self.local_dims().iter().sum()
    }

    /// Same subspaces and weights, new local operators (used for `Θ`).
    pub fn with_operators(&self, operators: Vec<LocalOperator>) -> Result<Self> {
        if operators.len() != self.members.len() {
            return input(format!(
                "expected {} local operators, got {}",
                self.members.len(),
                operators.len()
            ));
        }
        let members = self
            .members
            .iter()
            .zip(operators)
            .map(|(m, op)| Member {
                subspace: m.subspace.clone(),
                operator: op,
            })
            .collect();
        let field = self.space.field;
        let mut out = Self::new(self.space, members)?;
        out.space.field = out
            .members
            .iter()
            .fold(field, |f, m| f.join(Field::of(m.operator.matrix())));
        Ok(out)
    }

    /// Multiplies every weight by `factor`.
    pub fn scale_weights(&self, factor: f64) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|m| {
                Ok(Member {
                    subspace: m.subspace.with_weight(m.weight() * factor)?,
                    operator: m.operator.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.space, members)
    }
}

/// `k ∈ B(H)` with a lazily cached SVD.
#[derive(Clone, Debug)]
pub struct BoundedOperator {
    matrix: CMatrix,
    svd: OnceLock<Svd>,
}

impl PartialEq for BoundedOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl BoundedOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return input(format!(
                "bounded operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if !is_finite(&matrix) {
            return input("bounded operator contains non-finite entries");
        }
        Ok(Self {
            matrix,
            svd: OnceLock::new(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: identity(n),
            svd: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            svd: OnceLock::new(),
        }
    }

    pub fn svd(&self) -> &Svd {
        self.svd.get_or_init(|| Svd::new(&self.matrix))
    }

    pub fn norm(&self) -> f64 {
        self.svd().sigma_max()
    }

    pub fn pinv(&self, tol: &ToleranceProfile) -> CMatrix {
        self.svd().pinv(tol)
    }

    pub fn rank(&self, tol: &ToleranceProfile) -> usize {
        self.svd().rank(tol)
    }

    pub fn is_invertible(&self, tol: &ToleranceProfile) -> bool {
        self.rank(tol) == self.dim()
    }

    /// Orthonormal basis of `R(k)`.
    pub fn range_basis(&self, tol: &ToleranceProfile) -> CMatrix {
        orthonormalize(&self.matrix, tol)
    }

    /// `k k*`.
    pub fn gram(&self) -> CMatrix {
        &self.matrix * self.matrix.adjoint()
    }

    pub fn inverse(&self, tol: &ToleranceProfile) -> Result<CMatrix> {
        if !self.is_invertible(tol) {
            return precondition("operator is singular");
        }
        Ok(self.pinv(tol))
    }

    pub fn compose(&self, other: &BoundedOperator) -> Result<Self> {
        if self.dim() != other.dim() {
            return input("operator dimensions differ");
        }
        Self::new(&self.matrix * &other.matrix)
    }

    pub fn ensure_dim(&self, n: usize, what: &str) -> Result<()> {
        if self.dim() != n {
            return input(format!(
                "operator {what} acts on dimension {}, system has dimension {n}",
                self.dim()
            ));
        }
        Ok(())
    }
}

/// Residuals of `π_V T* = π_V T* π_{TV}` and, for unitary `T`, `π_{TV} T = T π_V`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectionLemmaReport {
    pub adjoint_residual: f64,
    pub unitary_residual: Option<f64>,
}

pub fn check_projection_lemma(
    v: &WeightedSubspace,
    t: &BoundedOperator,
    tol: &ToleranceProfile,
) -> Result<ProjectionLemmaReport> {
    t.ensure_dim(v.ambient_dim(), "T")?;
    let pv = v.projection();
    let image = orthonormalize(&(t.matrix() * v.basis()), tol);
    let p_image = &image * image.adjoint();
    let t_adj = t.matrix().adjoint();
    let adjoint_residual = operator_norm(&(&pv * &t_adj - &pv * &t_adj * &p_image));

    let n = t.dim();
    let isometry_defect = operator_norm(&(&t_adj * t.matrix() - identity(n)));
    let unitary_residual = (isometry_defect <= tol.at_scale(1.0))
        .then(|| operator_norm(&(&p_image * t.matrix() - t.matrix() * &pv)));

    Ok(ProjectionLemmaReport {
        adjoint_residual,
        unitary_residual,
    })
}

/// Embeds a classical k-frame `{f_j}` as `(H, ⟨·, f_j⟩, 1)`.
pub fn embed_k_frame(vectors: &[CVector]) -> Result<GFusionSystem> {
    let Some(first) = vectors.first() else {
        return input("k-frame embedding needs at least one vector");
    };
    let n = first.len();
    let mut field = Field::Real;
    let mut members = Vec::with_capacity(vectors.len());
    for (j, f) in vectors.iter().enumerate() {
        if f.len() != n {
            return precondition(format!(
                "vector {j} has dimension {}, expected {n}",
                f.len()
            ));
        }
        let row = CMatrix::from_fn(1, n, |_, i| f[i].conj());
        field = field.join(Field::of(&row));
        members.push(Member {
            subspace: WeightedSubspace::full(n, 1.0)?,
            operator: LocalOperator::new(row)?,
        });
    }
    GFusionSystem::new(HilbertSpace::new(field, n)?, members)
}

/// A named system together with its named operators (`k`, `u`, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub system: GFusionSystem,
    pub operators: BTreeMap<String, BoundedOperator>,
}

impl Fixture {
    pub fn operator(&self, name: &str) -> Result<&BoundedOperator> {
        self.operators
            .get(name)
            .ok_or_else(|| FrameError::Input(format!("fixture {} has no operator {name:?}", self.name)))
    }
}

fn coordinate_member(n: usize, j: usize) -> Result<Member> {
    let mut basis = CMatrix::zeros(n, 1);
    basis[(j, 0)] = c(1.0);
    let mut row = CMatrix::zeros(1, n);
    row[(0, j)] = c(1.0);
    Ok(Member {
        subspace: WeightedSubspace {
            basis,
            weight: 1.0,
        },
        operator: LocalOperator::new(row)?,
    })
}

/// `R³`, `W_j = span{e_j}`, `Λ_j f = f_j`, unit weights, with
/// `k: e1→e2, e2→e3, e3→e3` and `u: e1→0, e2→e1, e3→e2`.
pub fn fixture_a() -> Fixture {
    let n = 3;
    let members = (0..n)
        .map(|j| coordinate_member(n, j))
        .collect::<Result<Vec<_>>>()
        .expect("static fixture");
    let system = GFusionSystem::new(HilbertSpace::real(n).unwrap(), members).unwrap();
    let k = crate::numerics::real_matrix(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
    let u = crate::numerics::real_matrix(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let mut operators = BTreeMap::new();
    operators.insert("k".to_string(), BoundedOperator::new(k).unwrap());
    operators.insert("u".to_string(), BoundedOperator::new(u).unwrap());
    Fixture {
        name: "FIX-A".into(),
        system,
        operators,
    }
}

/// `k` of [`fixture_a`] with `e3 ↦ e3 + e1`, which makes it invertible.
pub fn fixture_a_invertible_k() -> BoundedOperator {
    BoundedOperator::new(crate::numerics::real_matrix(
        3,
        3,
        &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0],
    ))
    .unwrap()
}

/// `R²` with its two coordinate lines, `Λ_j f = f_j`, unit weights, `k = I`.
pub fn fixture_i() -> Fixture {
    let n = 2;
    let members = (0..n)
        .map(|j| coordinate_member(n, j))
        .collect::<Result<Vec<_>>>()
        .expect("static fixture");
    let system = GFusionSystem::new(HilbertSpace::real(n).unwrap(), members).unwrap();
    let mut operators = BTreeMap::new();
    operators.insert("k".to_string(), BoundedOperator::identity(n));
    Fixture {
        name: "FIX-I".into(),
        system,
        operators,
    }
}

/// Looks up `FIX-A`, `FIX-I` or one of the committed random systems `FIX-R01`…`FIX-R20`.
pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "FIX-A" => Ok(fixture_a()),
        "FIX-I" => Ok(fixture_i()),
        other => crate::fixtures::random_fixture(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{real_diag, real_matrix, real_vector, C64};

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn close(a: &CMatrix, b: &CMatrix, eps: f64) -> bool {
        operator_norm(&(a - b)) <= eps
    }

    #[test]
    fn projection_examples() {
        let w = WeightedSubspace::new(real_matrix(2, 1, &[1.0, 0.0]), 1.0, &tol()).unwrap();
        assert!(close(&w.projection(), &real_diag(&[1.0, 0.0]), 0.0));

        let full = WeightedSubspace::full(3, 2.0).unwrap();
        assert!(close(&full.projection(), &identity(3), 0.0));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let diag = WeightedSubspace::new(real_matrix(2, 1, &[s, s]), 1.0, &tol()).unwrap();
        assert!(close(
            &diag.projection(),
            &real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]),
            1e-15
        ));
    }

    #[test]
    fn subspace_validation() {
        assert!(WeightedSubspace::new(real_matrix(2, 1, &[2.0, 0.0]), 1.0, &tol()).is_err());
        assert!(WeightedSubspace::full(2, 0.0).is_err());
        assert!(WeightedSubspace::full(2, -1.0).is_err());
        let w = WeightedSubspace::from_vectors(real_matrix(2, 2, &[2.0, 4.0, 0.0, 0.0]), 1.0, &tol())
            .unwrap();
        assert_eq!(w.dim(), 1);
    }

    #[test]
    fn projection_lemma_small_cases() {
        let v = WeightedSubspace::new(real_matrix(2, 1, &[1.0, 0.0]), 1.0, &tol()).unwrap();
        let r = check_projection_lemma(&v, &BoundedOperator::identity(2), &tol()).unwrap();
        assert_eq!(r.adjoint_residual, 0.0);

        let rot = BoundedOperator::new(real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0])).unwrap();
        let r = check_projection_lemma(&v, &rot, &tol()).unwrap();
        assert!(r.adjoint_residual <= 1e-12);
        assert!(r.unitary_residual.unwrap() <= 1e-12);

        let wrong = BoundedOperator::identity(3);
        assert!(check_projection_lemma(&v, &wrong, &tol()).is_err());
    }

    #[test]
    fn projection_lemma_skips_unitary_part_for_non_isometries() {
        let v = WeightedSubspace::new(real_matrix(2, 1, &[1.0, 0.0]), 1.0, &tol()).unwrap();
        let t = BoundedOperator::new(real_matrix(2, 2, &[2.0, 1.0, 0.0, 1.0])).unwrap();
        let r = check_projection_lemma(&v, &t, &tol()).unwrap();
        assert!(r.adjoint_residual <= 1e-12);
        assert!(r.unitary_residual.is_none());
    }

    #[test]
    fn embed_rejects_mismatch() {
        let vs = vec![real_vector(&[1.0, 0.0]), real_vector(&[1.0, 0.0, 0.0])];
        assert!(matches!(embed_k_frame(&vs), Err(FrameError::Precondition(_))));
        assert!(embed_k_frame(&[]).is_err());
    }

    #[test]
    fn embed_sums_inner_products() {
        let vs = vec![
            real_vector(&[1.0, 2.0]),
            CVector::from_vec(vec![C64::new(0.0, 1.0), c(1.0)]),
        ];
        let sys = embed_k_frame(&vs).unwrap();
        assert_eq!(sys.space().field, Field::Complex);
        let f = real_vector(&[0.3, -0.7]);
        let lhs: f64 = sys
            .members()
            .iter()
            .map(|m| (m.analysis_block() * &f).norm_squared() * m.weight().powi(2))
            .sum();
        let rhs: f64 = vs.iter().map(|v| crate::numerics::inner(&f, v).norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn fixture_a_data() {
        let a = fixture("FIX-A").unwrap();
        assert_eq!(a.system.len(), 3);
        let k = a.operator("k").unwrap();
        assert!(close(&k.gram(), &real_diag(&[0.0, 1.0, 2.0]), 0.0));
        let u = a.operator("u").unwrap();
        assert!(close(&u.gram(), &real_diag(&[1.0, 1.0, 0.0]), 0.0));
        assert!(a.operator("nope").is_err());
        assert!(fixture_a_invertible_k().is_invertible(&tol()));
        assert!(!k.is_invertible(&tol()));
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(fixture("FIX-Z"), Err(FrameError::Input(_))));
    }

    #[test]
    fn system_validation() {
        let space = HilbertSpace::real(2).unwrap();
        assert!(GFusionSystem::new(space, vec![]).is_err());
        let bad = Member {
            subspace: WeightedSubspace::full(2, 1.0).unwrap(),
            operator: LocalOperator::new(CMatrix::zeros(1, 3)).unwrap(),
        };
        assert!(GFusionSystem::new(space, vec![bad]).is_err());
        assert!(HilbertSpace::real(0).is_err());
        assert!(BoundedOperator::new(CMatrix::zeros(2, 3)).is_err());
    }
}
