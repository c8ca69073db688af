//! Committed fixtures and the seeded generator that produced them.
//!
//! `FIX-Rnn` documents live in `fixtures/` next to their oracle sidecars and
//! are compiled in, so loading one never touches a random number generator.
//! [`regenerate`] rebuilds the exact bytes from the registry entry.

use std::collections::BTreeMap;

use rand::Rng;

use crate::document::FrameDocument;
use crate::error::{input, Result};
use crate::model::{
    fixture_a, fixture_i, BoundedOperator, Field, Fixture, GFusionSystem, HilbertSpace,
    LocalOperator, Member, WeightedSubspace,
};
use crate::numerics::{orthonormalize, CMatrix, ToleranceProfile};
use crate::oracle::{self, OracleSidecar};
use crate::probes::{gaussian, rng};

/// Shape of a random system: ambient dimension, one local dimension per member, field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub dim: usize,
    pub local_dims: Vec<usize>,
    pub field: Field,
}

impl RandomSpec {
    /// Parses `dim CxD ...` tokens, e.g. `6 3x2 1x1` for three 2-dimensional
    /// and one 1-dimensional local space in `F⁶`. A bare `D` means `1xD`.
    pub fn parse(tokens: &[String], field: Field) -> Result<Self> {
        let Some((first, rest)) = tokens.split_first() else {
            return input("spec needs a dimension");
        };
        let dim: usize = first
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| crate::FrameError::Input(format!("bad dimension {first:?}")))?;
        let mut local_dims = Vec::new();
        for tok in rest {
            let (count, d) = match tok.split_once('x') {
                Some((c, d)) => (c.parse::<usize>(), d.parse::<usize>()),
                None => (Ok(1), tok.parse::<usize>()),
            };
            match (count, d) {
                (Ok(c), Ok(d)) if c > 0 && d > 0 => local_dims.extend(std::iter::repeat_n(d, c)),
                _ => return input(format!("bad member token {tok:?} (expected CxD)")),
            }
        }
        if local_dims.is_empty() {
            return input("spec needs at least one member");
        }
        Ok(Self { dim, local_dims, field })
    }
}

fn gaussian_matrix(r: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize, field: Field) -> CMatrix {
    // row-major draw order keeps files readable against the generator
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(r, field);
        }
    }
    m
}

/// Draws a system and the operators `k` (Gaussian) and `k_lowrank` (rank `n − 1`).
///
/// Each `W_j` has dimension uniform in `[d_j, n]`, `Λ_j` is Gaussian and the
/// weights are uniform in `[0.5, 2]`.
pub fn generate(name: &str, spec: &RandomSpec, seed: u64, tol: &ToleranceProfile) -> Result<Fixture> {
    let n = spec.dim;
    let mut r = rng(seed);
    let mut members = Vec::with_capacity(spec.local_dims.len());
    for &d in &spec.local_dims {
        let m = r.random_range(d.min(n)..=n);
        let spanning = gaussian_matrix(&mut r, n, m, spec.field);
        let weight = r.random_range(0.5..=2.0);
        let op = gaussian_matrix(&mut r, d, n, spec.field);
        members.push(Member {
            subspace: WeightedSubspace::new(orthonormalize(&spanning, tol), weight, tol)?,
            operator: LocalOperator::new(op)?,
        });
    }
    let system = GFusionSystem::new(HilbertSpace::new(spec.field, n)?, members)?;
    let mut operators = BTreeMap::new();
    operators.insert("k".to_string(), BoundedOperator::new(gaussian_matrix(&mut r, n, n, spec.field))?);
    if n > 1 {
        let low = gaussian_matrix(&mut r, n, n - 1, spec.field) * gaussian_matrix(&mut r, n - 1, n, spec.field);
        operators.insert("k_lowrank".to_string(), BoundedOperator::new(low)?);
    }
    Ok(Fixture {
        name: name.to_string(),
        system,
        operators,
    })
}

pub struct RegistryEntry {
    pub name: &'static str,
    pub dim: usize,
    pub local_dims: &'static [usize],
    pub field: Field,
    pub seed: u64,
    document: &'static str,
    oracle: &'static str,
}

impl RegistryEntry {
    pub fn spec(&self) -> RandomSpec {
        RandomSpec {
            dim: self.dim,
            local_dims: self.local_dims.to_vec(),
            field: self.field,
        }
    }
}

macro_rules! registry {
    ($($name:literal, $seed:literal, $dim:literal, [$($d:literal),*], $field:ident;)*) => {
        pub static RANDOM_FIXTURES: &[RegistryEntry] = &[$(
            RegistryEntry {
                name: $name,
                dim: $dim,
                local_dims: &[$($d),*],
                field: Field::$field,
                seed: $seed,
                document: include_str!(concat!("../fixtures/", $name, ".json")),
                oracle: include_str!(concat!("../fixtures/", $name, ".oracle.json")),
            },
        )*];
    };
}

registry! {
    "FIX-R01", 1001, 2, [1, 1, 1], Real;
    "FIX-R02", 1002, 3, [2, 1, 1], Complex;
    "FIX-R03", 1003, 3, [1, 1, 1, 1], Real;
    "FIX-R04", 1004, 4, [2, 2, 1], Complex;
    "FIX-R05", 1005, 4, [1, 1, 1, 1, 1], Real;
    "FIX-R06", 1006, 4, [3, 2], Real;
    "FIX-R07", 1007, 5, [2, 2, 2], Complex;
    "FIX-R08", 1008, 5, [1, 2, 1, 2, 1], Real;
    "FIX-R09", 1009, 5, [3, 3], Complex;
    "FIX-R10", 1010, 6, [2, 2, 2, 2], Real;
    "FIX-R11", 1011, 6, [3, 3, 1], Complex;
    "FIX-R12", 1012, 6, [1, 1, 1, 1, 1, 1, 1], Real;
    "FIX-R13", 1013, 2, [1, 1], Complex;
    "FIX-R14", 1014, 3, [3], Real;
    "FIX-R15", 1015, 4, [1, 2, 1, 2], Complex;
    "FIX-R16", 1016, 5, [2, 1, 2, 1, 2, 1], Real;
    "FIX-R17", 1017, 6, [4, 2, 2], Complex;
    "FIX-R18", 1018, 3, [1, 2, 1, 2, 1, 2], Real;
    "FIX-R19", 1019, 4, [2, 2, 2, 2, 2], Complex;
    "FIX-R20", 1020, 8, [3, 3, 3, 2], Real;
}

const FIXTURE_A_DOC: &str = include_str!("../fixtures/FIX-A.json");
const FIXTURE_A_ORACLE: &str = include_str!("../fixtures/FIX-A.oracle.json");
const FIXTURE_I_DOC: &str = include_str!("../fixtures/FIX-I.json");
const FIXTURE_I_ORACLE: &str = include_str!("../fixtures/FIX-I.oracle.json");

/// `FIX-A`, `FIX-I`, then the random fixtures in registry order.
pub fn fixture_names() -> Vec<&'static str> {
    let mut out = vec!["FIX-A", "FIX-I"];
    out.extend(RANDOM_FIXTURES.iter().map(|e| e.name));
    out
}

pub fn registry_entry(name: &str) -> Option<&'static RegistryEntry> {
    RANDOM_FIXTURES.iter().find(|e| e.name == name)
}

/// Committed `(document, oracle)` text.
pub fn committed(name: &str) -> Result<(&'static str, &'static str)> {
    match name {
        "FIX-A" => Ok((FIXTURE_A_DOC, FIXTURE_A_ORACLE)),
        "FIX-I" => Ok((FIXTURE_I_DOC, FIXTURE_I_ORACLE)),
        other => registry_entry(other)
            .map(|e| (e.document, e.oracle))
            .ok_or_else(|| crate::FrameError::Input(format!("unknown fixture {other}"))),
    }
}

pub fn committed_oracle(name: &str) -> Result<OracleSidecar> {
    OracleSidecar::parse(committed(name)?.1)
}

pub fn random_fixture(name: &str) -> Result<Fixture> {
    let (doc, _) = committed(name)?;
    FrameDocument::parse(doc)?.fixture(&ToleranceProfile::default())
}

/// Document for a freshly generated or built-in fixture, with its seed recorded.
pub fn fixture_document(fixture: &Fixture, seed: Option<u64>) -> FrameDocument {
    let mut doc = FrameDocument::from_fixture(fixture);
    doc.seed = seed;
    doc
}

/// Rebuilds `(document, oracle)` text from scratch; equal to [`committed`] byte for byte.
pub fn regenerate(name: &str) -> Result<(String, String)> {
    let tol = ToleranceProfile::default();
    let (fixture, seed) = match name {
        "FIX-A" => (fixture_a(), None),
        "FIX-I" => (fixture_i(), None),
        other => {
            let Some(entry) = registry_entry(other) else {
                return input(format!("unknown fixture {other}"));
            };
            (generate(entry.name, &entry.spec(), entry.seed, &tol)?, Some(entry.seed))
        }
    };
    let oracle = oracle::compute(&fixture, &tol)?;
    Ok((fixture_document(&fixture, seed).to_json(), oracle.to_json()))
}
