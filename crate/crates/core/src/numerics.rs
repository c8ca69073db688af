//! Dense spectral substrate.
//!
//! Everything downstream (frame operators, duals, perturbation checks) is
//! expressed through the handful of routines here: Hermitian eigensolves,
//! SVD (both through LAPACK), Moore–Penrose pseudo-inverse, orthonormalization, PSD verdicts and
//! Douglas range factorization. All of them share one [`ToleranceProfile`],
//! so that a rank decision made in `pinv` agrees with the one made in
//! `orthonormalize` or in a range-inclusion test.
//!
//! Matrices are always stored over the complex field; real problems simply
//! carry zero imaginary parts.

use nalgebra::{Complex, DMatrix, DVector};
use ndarray::{Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, SVD, UPLO};
use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Absolute/relative tolerance pair.
///
/// A comparison at scale `s` accepts a discrepancy up to
/// `tau_abs + tau_rel * max(1, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub tau_abs: f64,
    pub tau_rel: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            tau_abs: 1e-10,
            tau_rel: 1e-9,
        }
    }
}

impl ToleranceProfile {
    pub fn new(tau_abs: f64, tau_rel: f64) -> Result<Self> {
        if !(tau_abs.is_finite() && tau_rel.is_finite()) || tau_abs < 0.0 || tau_rel < 0.0 {
            return input(format!(
                "tolerances must be finite and non-negative (got abs={tau_abs}, rel={tau_rel})"
            ));
        }
        Ok(Self { tau_abs, tau_rel })
    }

    pub fn at_scale(&self, scale: f64) -> f64 {
        self.tau_abs + self.tau_rel * scale.max(1.0)
    }

    /// Singular values at or below this are treated as zero.
    pub fn rank_cutoff(&self, sigma_max: f64) -> f64 {
        self.tau_abs + self.tau_rel * sigma_max
    }
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
    CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j]))
}

pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x)))
}

pub fn real_diag(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&real_vector(entries))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &CMatrix, what: &str) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        input(format!("{what} contains non-finite entries"))
    }
}

/// `⟨x, y⟩`, linear in the first argument.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

/// Column-major copy. `eigh` on a row-major complex array returns conjugated eigenvectors.
fn to_array(m: &CMatrix) -> Array2<C64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()).f(), |(i, j)| m[(i, j)])
}

fn from_array(a: &Array2<C64>) -> CMatrix {
    CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// Thin SVD with singular values in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    /// rows × p, p = min(rows, cols)
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    /// cols × p
    pub v: CMatrix,
}

impl Svd {
    pub fn new(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Self {
                u: CMatrix::zeros(rows, 0),
                singular_values: Vec::new(),
                v: CMatrix::zeros(cols, 0),
            };
        }
        let k = rows.min(cols);
        let (u, s, vt) = to_array(m)
            .svd(true, true)
            .expect("LAPACK SVD converges on finite input");
        let u = from_array(&u.expect("u requested"));
        let v = from_array(&vt.expect("vt requested")).adjoint();
        Self {
            u: u.columns(0, k).into_owned(),
            singular_values: s.to_vec(),
            v: v.columns(0, k).into_owned(),
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, tol: &ToleranceProfile) -> usize {
        let cutoff = tol.rank_cutoff(self.sigma_max());
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn pinv(&self, tol: &ToleranceProfile) -> CMatrix {
        let r = self.rank(tol);
        let rows = self.u.nrows();
        let cols = self.v.nrows();
        let mut out = CMatrix::zeros(cols, rows);
        for i in 0..r {
            let scale = c(1.0 / self.singular_values[i]);
            out += self.v.column(i) * self.u.column(i).adjoint() * scale;
        }
        out
    }

    /// Orthonormal basis of the column space, `rows × rank`.
    pub fn range_basis(&self, tol: &ToleranceProfile) -> CMatrix {
        let r = self.rank(tol);
        self.u.columns(0, r).into_owned()
    }
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn numerical_rank(m: &CMatrix, tol: &ToleranceProfile) -> usize {
    Svd::new(m).rank(tol)
}

/// Moore–Penrose pseudo-inverse with the shared rank cutoff.
pub fn pinv(m: &CMatrix, tol: &ToleranceProfile) -> CMatrix {
    Svd::new(m).pinv(tol)
}

/// Orthogonal projector onto `R(m)`.
pub fn range_projector(m: &CMatrix, tol: &ToleranceProfile) -> CMatrix {
    let q = orthonormalize(m, tol);
    &q * q.adjoint()
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    operator_norm(&(m - m.adjoint()))
}

fn ensure_hermitian(m: &CMatrix, tol: &ToleranceProfile) -> Result<()> {
    if m.nrows() != m.ncols() {
        return precondition(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        ));
    }
    ensure_finite(m, "matrix")?;
    let resid = hermitian_residual(m);
    let scale = operator_norm(m);
    if resid > tol.at_scale(scale) {
        return precondition(format!(
            "matrix is not self-adjoint (‖M − M*‖ = {resid:.3e}, ‖M‖ = {scale:.3e})"
        ));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, matching `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Rebuilds `V · diag(f(λ)) · V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvectors.nrows();
        let mut out = CMatrix::zeros(n, n);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let col = self.eigenvectors.column(i);
            out += col * col.adjoint() * c(f(lambda));
        }
        out
    }
}

/// Eigendecomposition of a self-adjoint matrix.
pub fn hermitian_eig(m: &CMatrix, tol: &ToleranceProfile) -> Result<HermitianEig> {
    ensure_hermitian(m, tol)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(HermitianEig {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let sym = (m + m.adjoint()) * c(0.5);
    let (values, vectors) = to_array(&sym)
        .eigh(UPLO::Lower)
        .expect("LAPACK Hermitian eigensolver converges on finite input");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, col| vectors[[r, order[col]]]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// `true` iff `λ_min(M) ≥ −(tau_abs + tau_rel·‖M‖)`.
pub fn psd_check(m: &CMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let eig = hermitian_eig(m, tol)?;
    let norm = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    Ok(eig.min() >= -(tol.tau_abs + tol.tau_rel * norm))
}

/// Principal square root of a PSD matrix; tiny negative eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &CMatrix, tol: &ToleranceProfile) -> Result<CMatrix> {
    if !psd_check(m, tol)? {
        return precondition("square root requested for a matrix that is not PSD");
    }
    Ok(hermitian_eig(m, tol)?.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// Orthonormal basis for the span of the input columns.
///
/// The number of output columns is the numerical rank of the input. Columns
/// are chosen greedily by largest remaining residual (pivoted modified
/// Gram–Schmidt with one re-orthogonalization pass), so inputs that are
/// already orthonormal come back unchanged up to rounding.
pub fn orthonormalize(spanning: &CMatrix, tol: &ToleranceProfile) -> CMatrix {
    let n = spanning.nrows();
    let rank = numerical_rank(spanning, tol);
    let mut work = spanning.clone();
    let mut used = vec![false; spanning.ncols()];
    let mut basis: Vec<CVector> = Vec::with_capacity(rank);

    for _ in 0..rank {
        let mut pivot = None;
        let mut best = 0.0;
        for (j, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let norm = work.column(j).norm();
            if norm > best {
                best = norm;
                pivot = Some(j);
            }
        }
        let Some(p) = pivot else { break };
        used[p] = true;
        let mut v: CVector = work.column(p).into_owned();
        for q in &basis {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        let norm = v.norm();
        if norm == 0.0 {
            break;
        }
        v /= c(norm);
        for (j, &done) in used.iter().enumerate() {
            if done {
                continue;
            }
            let proj = v.dotc(&work.column(j));
            let update = &v * proj;
            let mut col = work.column_mut(j);
            col -= update;
        }
        basis.push(v);
    }

    let mut out = CMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Outcome of the Douglas range-inclusion / factorization test for `L1 = L2·u`.
#[derive(Clone, Debug)]
pub struct DouglasFactorization {
    /// `R(L1) ⊆ R(L2)` within tolerance.
    pub included: bool,
    /// `pinv(L2)·L1`, the minimal-norm solution.
    pub u_min: CMatrix,
    /// `‖u_min‖`, the least admissible λ in `L1L1* ≤ λ²·L2L2*`.
    pub lambda_min: f64,
    /// `‖L1 − Q Q* L1‖` for an orthonormal basis `Q` of `R(L2)`.
    pub range_residual: f64,
    /// `‖L1 − L2·u_min‖`.
    pub factorization_residual: f64,
    /// `λ_min²·L2L2* − L1L1*` is PSD; only evaluated when `included`.
    pub majorization_holds: Option<bool>,
}

impl DouglasFactorization {
    /// All three equivalent conditions hold.
    pub fn certified(&self, tol: &ToleranceProfile, l1_norm: f64) -> bool {
        self.included
            && self.majorization_holds == Some(true)
            && self.factorization_residual <= tol.at_scale(l1_norm)
    }
}

pub fn douglas_factor(
    l1: &CMatrix,
    l2: &CMatrix,
    tol: &ToleranceProfile,
) -> Result<DouglasFactorization> {
    if l1.nrows() != l2.nrows() {
        return precondition(format!(
            "operators must share a codomain (L1 has {} rows, L2 has {})",
            l1.nrows(),
            l2.nrows()
        ));
    }
    ensure_finite(l1, "L1")?;
    ensure_finite(l2, "L2")?;
    let l1_norm = operator_norm(l1);

    let q = orthonormalize(l2, tol);
    let range_residual = operator_norm(&(l1 - &q * (q.adjoint() * l1)));
    let included = range_residual <= tol.at_scale(l1_norm);

    let u_min = pinv(l2, tol) * l1;
    let lambda_min = operator_norm(&u_min);
    let factorization_residual = operator_norm(&(l1 - l2 * &u_min));

    let majorization_holds = if included {
        let gap = l2 * l2.adjoint() * c(lambda_min * lambda_min) - l1 * l1.adjoint();
        Some(psd_check(&gap, tol)?)
    } else {
        None
    };

    Ok(DouglasFactorization {
        included,
        u_min,
        lambda_min,
        range_residual,
        factorization_residual,
        majorization_holds,
    })
}
