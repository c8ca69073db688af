//! Reference computations for tests, written without LAPACK.
//!
//! A Hermitian `H = A + iB` is handled through its real symmetric embedding
//! `[[A, −B], [B, A]]`, which has the spectrum of `H` with every eigenvalue
//! doubled.

use framelab_core::{CMatrix, C64};

type Dense = Vec<Vec<f64>>;

fn embed(h: &CMatrix) -> Dense {
    let n = h.nrows();
    let mut out = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so tiny non-Hermitian noise does not matter
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            out[i][j] = z.re;
            out[i + n][j + n] = z.re;
            out[i][j + n] = -z.im;
            out[i + n][j] = z.im;
        }
    }
    out
}

/// Cholesky of `M + shift·I`; `true` when every pivot is positive.
fn cholesky_succeeds(m: &Dense, shift: f64) -> bool {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i][j] + if i == j { shift } else { 0.0 };
            s -= l[i][..j].iter().zip(&l[j][..j]).map(|(x, y)| x * y).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// `H + shift·I ≻ 0`.
pub fn positive_definite_after_shift(h: &CMatrix, shift: f64) -> bool {
    cholesky_succeeds(&embed(h), shift)
}

/// `H ⪰ −eps·I`, decided by a Cholesky factorization.
pub fn psd_within(h: &CMatrix, eps: f64) -> bool {
    positive_definite_after_shift(h, eps.max(f64::MIN_POSITIVE))
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `sup{A ≥ 0 : S − A·G ⪰ 0}` by bisection, with a shift of `rel·‖S‖_F`
/// absorbing round-off on the common kernel. `∞` when `G = 0`.
pub fn sup_lower_bound(s: &CMatrix, g: &CMatrix, rel: f64) -> f64 {
    if frobenius(g) == 0.0 {
        return f64::INFINITY;
    }
    let eps = rel * frobenius(s).max(1.0);
    let ok = |a: f64| psd_within(&(s - g * C64::new(a, 0.0)), eps);
    if !ok(0.0) {
        return 0.0;
    }
    let mut hi = 1.0;
    while ok(hi) {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    lo
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut a = embed(h);
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let total: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (lo, hi) = a.split_at_mut(q);
                for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (apk, aqk) = (*x, *y);
                    *x = c * apk - s * aqk;
                    *y = s * apk + c * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    diag.sort_by(f64::total_cmp);
    // each eigenvalue of H appears twice in the embedding
    diag.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Largest singular value, from the Jacobi spectrum of `M*M`.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let g = m.adjoint() * m;
    jacobi_eigenvalues(&g).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}
