mod common;

use common::{all_fixtures, dist, tol};
use framelab_core::fixtures::committed_oracle;
use framelab_core::frame_ops::{frame_operator, optimal_bounds, verify_k_g_fusion};
use framelab_core::numerics::{c, hermitian_eig, identity, operator_norm, orthonormalize};
use framelab_core::probes::{gaussian, rng};
use framelab_core::transforms::{transform_invertible, transform_unitary};
use framelab_core::{BoundedOperator, CMatrix, Field, Fixture};

fn gaussian_square(n: usize, field: Field, seed: u64) -> CMatrix {
    let mut r = rng(seed);
    CMatrix::from_fn(n, n, |_, _| gaussian(&mut r, field))
}

fn random_unitary(n: usize, field: Field, seed: u64) -> BoundedOperator {
    BoundedOperator::new(orthonormalize(&gaussian_square(n, field, seed), &tol())).unwrap()
}

fn frame_operators(fx: &Fixture) -> Vec<(&str, &BoundedOperator)> {
    let oracle = committed_oracle(&fx.name).unwrap();
    fx.operators
        .iter()
        .filter(|(name, _)| oracle.operator(name).unwrap().is_frame)
        .map(|(name, k)| (name.as_str(), k))
        .collect()
}

#[test]
fn commuting_invertible_image_is_a_k_frame() {
    for fx in all_fixtures() {
        for (name, k) in frame_operators(&fx) {
            let n = fx.system.dim();
            // polynomials in k commute with k
            let shift = 2.0 * k.norm() + 1.0;
            let u = BoundedOperator::new(k.matrix() * k.matrix() + identity(n) * c(shift)).unwrap();
            let t = transform_invertible(&fx.system, k, &u, &tol()).unwrap();
            assert!(t.passes(), "{} {name}", fx.name);
            let r = verify_k_g_fusion(&t.system, k, None, &tol()).unwrap();
            assert!(r.is_frame, "{} {name}", fx.name);
        }
    }
}

#[test]
fn commuting_unitary_image_is_a_k_frame() {
    for fx in all_fixtures() {
        for (name, k) in frame_operators(&fx) {
            let n = fx.system.dim();
            // reflections across eigenspaces of a Hermitian k commute with it
            let h = k.matrix() + k.matrix().adjoint();
            let k_h = BoundedOperator::new(h.clone()).unwrap();
            if !verify_k_g_fusion(&fx.system, &k_h, None, &tol()).unwrap().is_frame {
                continue;
            }
            let eig = hermitian_eig(&h, &tol()).unwrap();
            let v = &eig.eigenvectors;
            let signs = CMatrix::from_fn(n, n, |i, j| match (i == j, i % 2) {
                (false, _) => c(0.0),
                (true, 0) => c(1.0),
                (true, _) => c(-1.0),
            });
            let u = BoundedOperator::new(v * signs * v.adjoint()).unwrap();
            assert!(dist(&(u.matrix() * &h), &(&h * u.matrix())) <= 1e-9 * operator_norm(&h).max(1.0));
            let t = transform_unitary(&fx.system, &k_h, &u, &tol()).unwrap();
            assert!(t.passes(), "{} {name}", fx.name);
            assert!(verify_k_g_fusion(&t.system, &k_h, None, &tol()).unwrap().is_frame, "{} {name}", fx.name);
        }
    }
}

#[test]
fn unitary_round_trip_recovers_frame_operator() {
    for (i, fx) in all_fixtures().into_iter().enumerate() {
        let k = &fx.operators["k"];
        if !frame_operators(&fx).iter().any(|(n, _)| *n == "k") {
            continue;
        }
        let n = fx.system.dim();
        let u = random_unitary(n, fx.system.space().field, 500 + i as u64);
        let s = frame_operator(&fx.system);
        for forward in [transform_unitary, transform_invertible] {
            let there = forward(&fx.system, k, &u, &tol()).unwrap();
            let back = transform_unitary(&there.system, &there.target_operator, &u.adjoint(), &tol()).unwrap();
            assert!(dist(&frame_operator(&back.system), &s) <= 1e-9 * operator_norm(&s).max(1.0), "{}", fx.name);
            assert!(dist(back.target_operator.matrix(), k.matrix()) <= 1e-9 * k.norm().max(1.0), "{}", fx.name);
        }
    }
}

#[test]
fn certified_bounds_are_never_tighter_than_optimal() {
    for (i, fx) in all_fixtures().into_iter().enumerate() {
        let n = fx.system.dim();
        let field = fx.system.space().field;
        for (name, k) in frame_operators(&fx) {
            let invertible = BoundedOperator::new(gaussian_square(n, field, 900 + i as u64) + identity(n) * c(0.5)).unwrap();
            let unitary = random_unitary(n, field, 700 + i as u64);
            let images = [
                transform_invertible(&fx.system, k, &invertible, &tol()).unwrap(),
                transform_unitary(&fx.system, k, &unitary, &tol()).unwrap(),
            ];
            for t in images {
                let opt = optimal_bounds(&t.system, &t.target_operator, &tol()).unwrap();
                let slack = tol().at_scale(opt.upper);
                assert!(t.certified.lower <= opt.lower + slack, "{} {name}: {} > {}", fx.name, t.certified.lower, opt.lower);
                assert!(opt.upper <= t.certified.upper + slack, "{} {name}", fx.name);
            }
        }
    }
}
