mod common;

use common::{all_fixtures, dist, tol};
use framelab_core::document::FrameDocument;
use framelab_core::fixtures::committed as committed_fixture;
use framelab_core::frame_ops::optimal_bounds;
use framelab_core::model::{check_projection_lemma, embed_k_frame, fixture_a};
use framelab_core::oracle;
use framelab_core::suites::{committed, SuiteCases, SuiteName};
use framelab_core::{BoundedOperator, CVector, WeightedSubspace};

#[test]
fn projections_are_orthogonal_projections() {
    for fx in all_fixtures() {
        for (j, m) in fx.system.members().iter().enumerate() {
            let p = m.subspace.projection();
            assert!(dist(&(&p * &p), &p) <= 1e-10, "{} member {j}", fx.name);
            assert!(dist(&p, &p.adjoint()) <= 1e-10, "{} member {j}", fx.name);
        }
    }
}

#[test]
fn projection_lemma_suite() {
    let SuiteCases::ProjectionLemma(cases) = committed(SuiteName::ProjectionLemma).unwrap().cases else {
        panic!("wrong suite");
    };
    assert_eq!(cases.len(), 100);
    for (i, case) in cases.iter().enumerate() {
        let (basis, t) = case.matrices().unwrap();
        let v = WeightedSubspace::new(basis, 1.0, &tol()).unwrap();
        let r = check_projection_lemma(&v, &BoundedOperator::new(t).unwrap(), &tol()).unwrap();
        assert!(r.adjoint_residual <= 1e-10, "case {i}: {:e}", r.adjoint_residual);
        let u = r.unitary_residual.expect("T is unitary");
        assert!(u <= 1e-10, "case {i}: {u:e}");
    }
}

#[test]
fn embedded_orthonormal_basis_is_parseval_for_identity() {
    let SuiteCases::ProjectionLemma(cases) = committed(SuiteName::ProjectionLemma).unwrap().cases else {
        panic!("wrong suite");
    };
    for (i, case) in cases.iter().enumerate().take(30) {
        let (_, t) = case.matrices().unwrap();
        let vectors: Vec<CVector> = (0..t.ncols()).map(|j| t.column(j).into_owned()).collect();
        let system = embed_k_frame(&vectors).unwrap();
        let b = optimal_bounds(&system, &BoundedOperator::identity(t.nrows()), &tol()).unwrap();
        assert!((b.lower - 1.0).abs() <= 1e-9 && (b.upper - 1.0).abs() <= 1e-9, "case {i}: {b:?}");
    }
}

#[test]
fn fixture_a_reload_is_bit_stable() {
    let (doc, sidecar) = committed_fixture("FIX-A").unwrap();
    let parsed = FrameDocument::parse(doc).unwrap();
    assert_eq!(parsed.to_json(), doc);
    let reloaded = parsed.fixture(&tol()).unwrap();
    assert_eq!(reloaded, fixture_a());
    assert_eq!(oracle::compute(&reloaded, &tol()).unwrap().to_json(), sidecar);
}

#[test]
fn every_committed_document_round_trips() {
    for name in framelab_core::fixtures::fixture_names() {
        let (doc, _) = committed_fixture(name).unwrap();
        let parsed = FrameDocument::parse(doc).unwrap();
        let once = parsed.fixture(&tol()).unwrap();
        let again = FrameDocument::parse(&parsed.to_json()).unwrap().fixture(&tol()).unwrap();
        assert_eq!(once, again, "{name}");
    }
}
