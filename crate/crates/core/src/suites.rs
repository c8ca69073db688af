//! Committed random case suites for the linear-algebra substrate.
//!
//! | suite              | seed | cases |
//! |--------------------|------|-------|
//! | `douglas`          | 2001 | 100   |
//! | `moore-penrose`    | 2002 | 200   |
//! | `projection-lemma` | 2003 | 100   |
//! | `paley-wiener`     | 2004 | 100   |

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::document::{decode_rows, encode_rows, Rows};
use crate::error::{input, FrameError, Result};
use crate::model::Field;
use crate::numerics::{c, identity, operator_norm, orthonormalize, CMatrix, ToleranceProfile};
use crate::probes::{gaussian, rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Douglas,
    MoorePenrose,
    ProjectionLemma,
    PaleyWiener,
}

impl SuiteName {
    pub const ALL: [SuiteName; 4] = [
        SuiteName::Douglas,
        SuiteName::MoorePenrose,
        SuiteName::ProjectionLemma,
        SuiteName::PaleyWiener,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Douglas => "douglas",
            SuiteName::MoorePenrose => "moore-penrose",
            SuiteName::ProjectionLemma => "projection-lemma",
            SuiteName::PaleyWiener => "paley-wiener",
        }
    }

    pub fn seed(self) -> u64 {
        match self {
            SuiteName::Douglas => 2001,
            SuiteName::MoorePenrose => 2002,
            SuiteName::ProjectionLemma => 2003,
            SuiteName::PaleyWiener => 2004,
        }
    }

    pub fn case_count(self) -> usize {
        match self {
            SuiteName::MoorePenrose => 200,
            _ => 100,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| FrameError::Input(format!("unknown suite {name:?}")))
    }

    pub fn committed(self) -> &'static str {
        match self {
            SuiteName::Douglas => include_str!("../fixtures/suites/douglas.json"),
            SuiteName::MoorePenrose => include_str!("../fixtures/suites/moore-penrose.json"),
            SuiteName::ProjectionLemma => include_str!("../fixtures/suites/projection-lemma.json"),
            SuiteName::PaleyWiener => include_str!("../fixtures/suites/paley-wiener.json"),
        }
    }
}

/// `L₁ = L₂·G`; `L₂` is `n × D` of rank `rank`, `G` is `D × n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DouglasCase {
    pub rank: usize,
    pub l2: Rows,
    pub g: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixCase {
    pub rank: usize,
    pub m: Rows,
}

/// `subspace` lists orthonormal basis vectors; `t` is unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCase {
    pub subspace: Rows,
    pub t: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaleyWienerCase {
    pub lambda1: f64,
    pub lambda2: f64,
    pub u: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", content = "cases", rename_all = "kebab-case")]
pub enum SuiteCases {
    Douglas(Vec<DouglasCase>),
    MoorePenrose(Vec<MatrixCase>),
    ProjectionLemma(Vec<ProjectionCase>),
    PaleyWiener(Vec<PaleyWienerCase>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub seed: u64,
    #[serde(flatten)]
    pub cases: SuiteCases,
}

impl Suite {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FrameError::Input(format!("malformed suite: {e}")))
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

fn pick_field(r: &mut ChaCha8Rng) -> Field {
    if r.random_bool(0.5) {
        Field::Complex
    } else {
        Field::Real
    }
}

fn gaussian_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, field: Field) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(r, field);
        }
    }
    m
}

/// Product of Gaussian `rows × rank` and `rank × cols` factors.
fn low_rank(r: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize, field: Field) -> CMatrix {
    gaussian_matrix(r, rows, rank, field) * gaussian_matrix(r, rank, cols, field)
}

pub fn generate(name: SuiteName) -> Suite {
    let tol = ToleranceProfile::default();
    let mut r = rng(name.seed());
    let count = name.case_count();
    let cases = match name {
        SuiteName::Douglas => SuiteCases::Douglas(
            (0..count)
                .map(|_| {
                    let field = pick_field(&mut r);
                    let n = r.random_range(2..=6);
                    let d = r.random_range(n..=n + 4);
                    let rank = r.random_range(1..=n);
                    let l2 = low_rank(&mut r, n, d, rank, field);
                    let g = gaussian_matrix(&mut r, d, n, field);
                    DouglasCase {
                        rank,
                        l2: encode_rows(&l2, field),
                        g: encode_rows(&g, field),
                    }
                })
                .collect(),
        ),
        SuiteName::MoorePenrose => SuiteCases::MoorePenrose(
            (0..count)
                .map(|_| {
                    let field = pick_field(&mut r);
                    let rows = r.random_range(1..=6);
                    let cols = r.random_range(1..=6);
                    let rank = r.random_range(0..=rows.min(cols));
                    let scale = 10f64.powf(r.random_range(-2.0..=2.0));
                    let m = low_rank(&mut r, rows, cols, rank, field) * c(scale);
                    MatrixCase {
                        rank,
                        m: encode_rows(&m, field),
                    }
                })
                .collect(),
        ),
        SuiteName::ProjectionLemma => SuiteCases::ProjectionLemma(
            (0..count)
                .map(|_| {
                    let field = pick_field(&mut r);
                    let n = r.random_range(2..=8);
                    let m = r.random_range(1..=n);
                    let basis = orthonormalize(&gaussian_matrix(&mut r, n, m, field), &tol);
                    let t = orthonormalize(&gaussian_matrix(&mut r, n, n, field), &tol);
                    ProjectionCase {
                        subspace: encode_rows(&basis.transpose(), field),
                        t: encode_rows(&t, field),
                    }
                })
                .collect(),
        ),
        SuiteName::PaleyWiener => SuiteCases::PaleyWiener(
            (0..count)
                .map(|_| {
                    let field = pick_field(&mut r);
                    let n = r.random_range(2..=5);
                    let lambda1: f64 = r.random_range(0.0..0.6);
                    let lambda2: f64 = r.random_range(0.0..0.6);
                    // ‖E‖ ≤ (λ₁+λ₂)/(1+λ₂) is sufficient; overshoot to mix in inconclusive cases
                    let reach = r.random_range(0.0..1.3) * (lambda1 + lambda2) / (1.0 + lambda2);
                    let e = gaussian_matrix(&mut r, n, n, field);
                    let norm = operator_norm(&e);
                    let u = identity(n) + e * c(reach / norm);
                    PaleyWienerCase {
                        lambda1,
                        lambda2,
                        u: encode_rows(&u, field),
                    }
                })
                .collect(),
        ),
    };
    Suite {
        seed: name.seed(),
        cases,
    }
}

pub fn committed(name: SuiteName) -> Result<Suite> {
    Suite::parse(name.committed())
}

fn square(rows: &Rows, what: &str) -> Result<CMatrix> {
    let m = decode_rows(rows, rows.len(), what)?;
    if m.nrows() != m.ncols() {
        return input(format!("{what} must be square"));
    }
    Ok(m)
}

fn width(rows: &Rows) -> usize {
    rows.first().map_or(0, |r| r.len())
}

impl DouglasCase {
    /// `(L₁, L₂)`.
    pub fn matrices(&self) -> Result<(CMatrix, CMatrix)> {
        let l2 = decode_rows(&self.l2, width(&self.l2), "L2")?;
        let g = decode_rows(&self.g, width(&self.g), "G")?;
        if g.nrows() != l2.ncols() {
            return input("G must have as many rows as L2 has columns");
        }
        Ok((&l2 * g, l2))
    }
}

impl MatrixCase {
    pub fn matrix(&self) -> Result<CMatrix> {
        decode_rows(&self.m, width(&self.m), "M")
    }
}

impl ProjectionCase {
    /// `(basis with vectors as columns, T)`.
    pub fn matrices(&self) -> Result<(CMatrix, CMatrix)> {
        let t = square(&self.t, "T")?;
        let basis = decode_rows(&self.subspace, t.ncols(), "subspace")?.transpose();
        Ok((basis, t))
    }
}

impl PaleyWienerCase {
    pub fn matrix(&self) -> Result<CMatrix> {
        square(&self.u, "U")
    }
}
