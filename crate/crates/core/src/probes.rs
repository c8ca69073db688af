//! Deterministic probe vectors and index subsets.
//!
//! Identities that are linear in `f` are checked at the matrix level; the
//! probes here serve the quadratic and sesquilinear ones. Every generator is
//! seeded, so repeated runs see the same vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::model::Field;
use crate::numerics::{CVector, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, field: Field) -> C64 {
    match field {
        Field::Real => C64::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            C64::new(
                s * rng.sample::<f64, _>(StandardNormal),
                s * rng.sample::<f64, _>(StandardNormal),
            )
        }
    }
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize, field: Field) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| gaussian(rng, field));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Standard basis vectors followed by `random` seeded unit vectors.
pub fn probe_vectors(n: usize, field: Field, random: usize, seed: u64) -> Vec<CVector> {
    let mut out: Vec<CVector> = (0..n)
        .map(|i| {
            let mut e = CVector::zeros(n);
            e[i] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    let mut r = rng(seed);
    out.extend((0..random).map(|_| random_unit_vector(&mut r, n, field)));
    out
}

/// Index subsets of `0..count`: all of them (including ∅) when `count ≤ exhaustive_limit`,
/// otherwise ∅, J, singletons, their complements and seeded random subsets up to `sampled`.
pub fn subsets(count: usize, exhaustive_limit: usize, sampled: usize, seed: u64) -> Vec<Vec<usize>> {
    if count <= exhaustive_limit {
        return (0u64..(1u64 << count))
            .map(|mask| (0..count).filter(|&j| mask >> j & 1 == 1).collect())
            .collect();
    }
    let all: Vec<usize> = (0..count).collect();
    let mut out = vec![Vec::new(), all.clone()];
    for j in 0..count {
        out.push(vec![j]);
        out.push(all.iter().copied().filter(|&i| i != j).collect());
    }
    let mut r = rng(seed);
    while out.len() < sampled {
        out.push((0..count).filter(|_| r.random_bool(0.5)).collect());
    }
    out
}

/// `J \ I`.
pub fn complement(count: usize, subset: &[usize]) -> Vec<usize> {
    (0..count).filter(|j| !subset.contains(j)).collect()
}
