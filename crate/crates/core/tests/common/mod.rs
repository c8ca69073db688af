#![allow(dead_code)]

use framelab_core::fixtures::fixture_names;
use framelab_core::model::fixture;
use framelab_core::numerics::operator_norm;
use framelab_core::{CMatrix, Fixture, ToleranceProfile};

pub fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

/// FIX-A, FIX-I and the twenty committed random systems.
pub fn all_fixtures() -> Vec<Fixture> {
    fixture_names().into_iter().map(|n| fixture(n).unwrap()).collect()
}

pub fn random_fixtures() -> Vec<Fixture> {
    fixture_names()
        .into_iter()
        .filter(|n| n.starts_with("FIX-R"))
        .map(|n| fixture(n).unwrap())
        .collect()
}

pub fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    operator_norm(&(a - b))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
