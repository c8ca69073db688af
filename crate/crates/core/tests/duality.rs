mod common;

use common::{all_fixtures, random_fixtures, tol};
use framelab_core::duality::{
    canonical_dual, check_identity_tg1, check_identity_ti1, check_three_quarters, complement_residual,
    construct_q_dual, qdual_bound_corollary, three_quarters_extremal, verify_kgf_dual, verify_q_dual,
    KGFDualPair,
};
use framelab_core::frame_ops::parseval_operator;
use framelab_core::model::{fixture_a, fixture_i};
use framelab_core::probes::{complement, probe_vectors, subsets};
use framelab_core::{BoundedOperator, Fixture};

fn q_dual_fixtures() -> Vec<Fixture> {
    let mut out = vec![fixture_i()];
    out.extend(random_fixtures());
    out
}

#[test]
fn q_dual_forms_agree_and_bound_holds() {
    for fx in q_dual_fixtures() {
        let k = &fx.operators["k"];
        let built = construct_q_dual(&fx.system, k, &tol()).unwrap();
        assert!(built.reading.is_some(), "{}: {:?}", fx.name, built.attempts);
        let pair = &built.pair;
        assert!(pair.residual <= 1e-9 * k.norm().max(1.0), "{}: {:e}", fx.name, pair.residual);
        let r = verify_q_dual(pair, &tol()).unwrap();
        assert!(r.certified && r.verdicts.iter().all(|&v| v), "{}: {r:?}", fx.name);
        assert!(r.forms_spread <= 1e-10 * k.norm().max(1.0), "{}: {:e}", fx.name, r.forms_spread);
        let b = qdual_bound_corollary(pair, &tol()).unwrap();
        assert!(b.dual_is_frame, "{}", fx.name);
        let predicted = 1.0 / (b.b_op * b.q_norm * b.q_norm);
        assert!((predicted - b.c_predicted).abs() <= 1e-12 * predicted);
        assert!(b.c_op >= predicted - 1e-9, "{}: {} < {predicted}", fx.name, b.c_op);
        assert!(b.c_holds);
    }
}

#[test]
fn fixture_a_q_dual_construction_does_not_certify() {
    // rank(k) = 2 but T_Λ = I, so u = k and u_j W_j collapses on e1: no reading closes the gap
    let fx = fixture_a();
    let built = construct_q_dual(&fx.system, &fx.operators["k"], &tol()).unwrap();
    assert!(built.reading.is_none());
    assert_eq!(built.attempts.len(), 2);
    for a in &built.attempts {
        assert!(!a.certified);
        assert!(a.residual >= 0.5, "{a:?}");
    }
}

fn certified_canonical_pairs() -> Vec<(String, KGFDualPair)> {
    let mut out = Vec::new();
    for fx in all_fixtures() {
        for (name, k) in &fx.operators {
            let Ok(pair) = canonical_dual(&fx.system, k, &tol()) else {
                continue;
            };
            if pair.is_certified(&tol()) {
                out.push((format!("{} {name}", fx.name), pair));
            }
        }
    }
    out
}

#[test]
fn canonical_dual_reproduces_invertible_k() {
    for fx in all_fixtures() {
        for (name, k) in &fx.operators {
            if !k.is_invertible(&tol()) {
                continue;
            }
            let pair = canonical_dual(&fx.system, k, &tol()).unwrap();
            assert!(pair.residual <= 1e-9 * k.norm().max(1.0), "{} {name}: {:e}", fx.name, pair.residual);
            let r = verify_kgf_dual(&pair, &tol()).unwrap();
            assert!(r.certified && r.dual_frame.is_frame && r.predicted_lower_holds, "{} {name}", fx.name);
        }
    }
    let k_prime = framelab_core::model::fixture_a_invertible_k();
    let pair = canonical_dual(&fixture_a().system, &k_prime, &tol()).unwrap();
    assert!(pair.residual <= 1e-9);
}

#[test]
fn partial_operators_split_k() {
    let pairs = certified_canonical_pairs();
    assert!(pairs.len() >= 22);
    for (label, pair) in &pairs {
        for s in subsets(pair.base.len(), 10, 256, 0) {
            let r = complement_residual(pair, &s).unwrap();
            assert!(r <= 1e-10 * pair.k.norm().max(1.0), "{label} {s:?}: {r:e}");
        }
    }
}

#[test]
fn tg1_identity_on_all_subsets() {
    for (label, pair) in certified_canonical_pairs() {
        let probes = probe_vectors(pair.base.dim(), pair.base.space().field, 20, 11);
        for s in subsets(pair.base.len(), 10, 256, 0) {
            for f in &probes {
                let r = check_identity_tg1(&pair, &s, f, &tol()).unwrap();
                assert!(r.residual <= 1e-9 * r.scale.max(1.0), "{label} {s:?}: {r:?}");
            }
        }
    }
}

#[test]
fn ti1_and_three_quarters_on_parsevalized_fixtures() {
    for fx in all_fixtures() {
        let k = parseval_operator(&fx.system, &tol()).unwrap();
        let count = fx.system.len();
        let probes = probe_vectors(fx.system.dim(), fx.system.space().field, 20, 13);
        for s in subsets(count, 10, 256, 0) {
            let rest = complement(count, &s);
            let alternate: Vec<usize> = rest.iter().copied().step_by(2).collect();
            for f in &probes {
                for e in [&[][..], &rest[..], &alternate[..]] {
                    let r = check_identity_ti1(&fx.system, &k, &s, e, f, &tol()).unwrap();
                    assert!(r.residual <= 1e-9 * r.scale.max(1.0), "{} {s:?} {e:?}: {r:?}", fx.name);
                }
                let q = check_three_quarters(&fx.system, &k, &s, f, &tol()).unwrap();
                assert!(q.holds && q.slack >= -1e-9, "{} {s:?}: {q:?}", fx.name);
            }
        }
    }
}

#[test]
fn three_quarters_is_attained() {
    let (system, k, subset, f) = three_quarters_extremal();
    let q = check_three_quarters(&system, &k, &subset, &f, &tol()).unwrap();
    assert!(q.holds);
    assert!(q.slack.abs() <= 1e-9, "{q:?}");
    assert!((q.lhs - 0.75 * (k.gram() * &f).norm_squared()).abs() <= 1e-9);
}

#[test]
fn identities_require_certified_or_parseval_inputs() {
    let fx = fixture_i();
    let k = BoundedOperator::new(fx.operators["k"].matrix() * framelab_core::numerics::c(2.0)).unwrap();
    let f = probe_vectors(2, fx.system.space().field, 0, 0).remove(0);
    assert!(check_three_quarters(&fx.system, &k, &[0], &f, &tol()).is_err());
    assert!(check_identity_ti1(&fx.system, &k, &[0], &[], &f, &tol()).is_err());
}
