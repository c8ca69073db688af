mod common;

use common::{all_fixtures, random_fixtures, rel_err, tol};
use framelab_core::frame_ops::{frame_operator, optimal_bounds};
use framelab_core::model::{fixture_a, fixture_a_invertible_k, fixture_i};
use framelab_core::numerics::hermitian_eig;
use framelab_core::perturbation::{
    paley_wiener_check, perturb_hypothesis, predicted_bounds, scaled_operators, verify_perturbation_theorem,
    LemmaVerdict, PerturbationMode, PerturbationParams,
};
use framelab_core::suites::{committed, SuiteCases, SuiteName};
use framelab_core::{BoundedOperator, GFusionSystem};

const MODES: [PerturbationMode; 4] = [
    PerturbationMode::P1SqrtSum,
    PerturbationMode::PVariantKstar,
    PerturbationMode::CP2NormSum,
    PerturbationMode::TSqSum,
];
const SCALES: [f64; 3] = [0.9, 1.05, 1.1];

fn falsified(system: &GFusionSystem, k: &BoundedOperator, c: f64, params: PerturbationParams) -> bool {
    perturb_hypothesis(system, &scaled_operators(system, c), k, &params, &tol())
        .unwrap()
        .falsified
}

/// `(1−c)²·λ_max(k⁻¹ S k⁻*)`, the least `R` admitting `Θ = c·Λ` in T-sqsum.
fn sqsum_threshold(system: &GFusionSystem, k: &BoundedOperator, c: f64) -> f64 {
    let inv = k.inverse(&tol()).unwrap();
    let m = &inv * frame_operator(system) * inv.adjoint();
    (1.0 - c).powi(2) * hermitian_eig(&m, &tol()).unwrap().max()
}

#[test]
fn fixture_i_scaling_thresholds() {
    let fx = fixture_i();
    let k = &fx.operators["k"];
    for c in SCALES {
        let d = (1.0 - c * c).abs();
        let cases = [
            (PerturbationParams { lambda1: d, ..PerturbationParams::zero(PerturbationMode::P1SqrtSum) }, "lambda1"),
            (PerturbationParams { gamma: d, ..PerturbationParams::zero(PerturbationMode::P1SqrtSum) }, "gamma"),
            (PerturbationParams { lambda2: d / (c * c), ..PerturbationParams::zero(PerturbationMode::PVariantKstar) }, "lambda2"),
            (PerturbationParams { gamma: d, ..PerturbationParams::zero(PerturbationMode::PVariantKstar) }, "gamma"),
            (PerturbationParams::with_r(PerturbationMode::CP2NormSum, d * 2f64.sqrt()), "R"),
            (PerturbationParams::with_r(PerturbationMode::TSqSum, (1.0 - c).powi(2)), "R"),
        ];
        for (at, which) in cases {
            let scaled = |f: f64| {
                let mut p = at;
                match which {
                    "lambda1" => p.lambda1 *= f,
                    "lambda2" => p.lambda2 *= f,
                    "gamma" => p.gamma *= f,
                    _ => p.r *= f,
                }
                p
            };
            assert!(!falsified(&fx.system, k, c, scaled(1.0 + 1e-6)), "c={c} {:?} {which}", at.mode);
            assert!(falsified(&fx.system, k, c, scaled(1.0 - 1e-3)), "c={c} {:?} {which}", at.mode);
        }
    }
}

#[test]
fn enlarging_parameters_keeps_hypothesis() {
    for fx in random_fixtures().into_iter().take(6) {
        let k = &fx.operators["k"];
        if !k.is_invertible(&tol()) {
            continue;
        }
        for c in SCALES {
            let d = (1.0 - c * c).abs() * 1.01;
            let base = [
                PerturbationParams { lambda1: d, ..PerturbationParams::zero(PerturbationMode::P1SqrtSum) },
                PerturbationParams { lambda1: d, ..PerturbationParams::zero(PerturbationMode::PVariantKstar) },
                PerturbationParams::with_r(PerturbationMode::TSqSum, 1.01 * sqsum_threshold(&fx.system, k, c)),
            ];
            for p in base {
                assert!(!falsified(&fx.system, k, c, p), "{} c={c} {p:?}", fx.name);
                let bumps = [
                    PerturbationParams { lambda1: (p.lambda1 * 1.5).min(0.99), ..p },
                    PerturbationParams { lambda2: 0.3, ..p },
                    PerturbationParams { gamma: p.gamma + 0.2, ..p },
                    PerturbationParams { r: p.r * 2.0 + 0.1, ..p },
                ];
                for q in bumps {
                    assert!(!falsified(&fx.system, k, c, q), "{} c={c} {q:?}", fx.name);
                }
            }
        }
    }
}

#[test]
fn unperturbed_family_is_a_fixed_point() {
    for fx in all_fixtures().into_iter().step_by(3) {
        for (name, k) in &fx.operators {
            let Ok(ab) = optimal_bounds(&fx.system, k, &tol()) else {
                continue;
            };
            let theta = scaled_operators(&fx.system, 1.0);
            for mode in MODES {
                let params = PerturbationParams::zero(mode);
                let p = predicted_bounds(&params, ab.lower, ab.upper, k.norm()).unwrap();
                let r = verify_perturbation_theorem(&fx.system, &theta, k, &params, &tol()).unwrap();
                assert!(!r.hypothesis.falsified, "{} {name} {mode:?}", fx.name);
                assert!(r.passed() && r.lower_contained, "{} {name} {mode:?}", fx.name);
                assert!(rel_err(p.lower, ab.lower) <= 1e-12, "{} {name} {mode:?}", fx.name);
                if mode == PerturbationMode::CP2NormSum && ab.upper > 1.0 {
                    // min{B + R√(B/A), R‖k‖ + √B} drops to √B at R = 0
                    assert!(rel_err(p.upper, ab.upper.sqrt()) <= 1e-12);
                    assert!(!r.upper_contained);
                    assert!(r.errata.iter().any(|e| e.bound == "upper"), "{} {name}", fx.name);
                    continue;
                }
                assert!(rel_err(p.upper, ab.upper) <= 1e-12, "{} {name} {mode:?}", fx.name);
                assert!(r.upper_contained && r.errata.is_empty(), "{} {name} {mode:?}", fx.name);
            }
        }
    }
}

#[test]
fn sqsum_containment_on_scaling_families() {
    let mut cases: Vec<(String, GFusionSystem, BoundedOperator)> = vec![
        ("FIX-I".into(), fixture_i().system, fixture_i().operators["k"].clone()),
        ("FIX-A k'".into(), fixture_a().system, fixture_a_invertible_k()),
    ];
    for fx in random_fixtures() {
        let k = fx.operators["k"].clone();
        if k.is_invertible(&tol()) {
            cases.push((fx.name.clone(), fx.system, k));
        }
    }
    let mut asserted = 0;
    for (name, system, k) in &cases {
        let a = optimal_bounds(system, k, &tol()).unwrap().lower;
        for c in SCALES {
            let r = sqsum_threshold(system, k, c);
            if r >= a {
                continue;
            }
            let params = PerturbationParams::with_r(PerturbationMode::TSqSum, r);
            let rep = verify_perturbation_theorem(system, &scaled_operators(system, c), k, &params, &tol()).unwrap();
            assert!(!rep.hypothesis.falsified, "{name} c={c}");
            assert!(rep.containment_asserted && rep.passed(), "{name} c={c}: {rep:?}");
            assert!(rep.predicted.lower <= rep.theta.optimal.lower + 1e-9);
            assert!(rep.theta.optimal.upper <= rep.predicted.upper + 1e-9);
            asserted += 1;
        }
    }
    assert!(asserted >= 20, "only {asserted} cases reached");
}

#[test]
fn fixture_i_upper_bound_is_attained() {
    let fx = fixture_i();
    let k = &fx.operators["k"];
    let params = PerturbationParams::with_r(PerturbationMode::TSqSum, (1.1f64 - 1.0).powi(2));
    let rep = verify_perturbation_theorem(&fx.system, &scaled_operators(&fx.system, 1.1), k, &params, &tol()).unwrap();
    assert!((rep.predicted.upper - 1.21).abs() <= 1e-12);
    assert!((rep.theta.optimal.upper - 1.21).abs() <= 1e-12);
}

#[test]
fn paley_wiener_suite() {
    let SuiteCases::PaleyWiener(cases) = committed(SuiteName::PaleyWiener).unwrap().cases else {
        panic!("wrong suite");
    };
    assert_eq!(cases.len(), 100);
    let mut certified = 0;
    for (i, case) in cases.iter().enumerate() {
        let u = case.matrix().unwrap();
        let r = paley_wiener_check(&u, case.lambda1, case.lambda2, &tol()).unwrap();
        if r.verdict == LemmaVerdict::Inconclusive {
            assert!(r.conclusion_holds.is_none());
            continue;
        }
        certified += 1;
        let within = |x: f64, lo: f64, hi: f64| x >= lo - 1e-10 && x <= hi + 1e-10;
        assert!(within(r.sigma_min, r.predicted.lower, r.predicted.upper), "case {i}");
        assert!(within(r.sigma_max, r.predicted.lower, r.predicted.upper), "case {i}");
        let (lo, hi) = (r.inverse_predicted.lower, r.inverse_predicted.upper);
        assert!(within(r.inverse_sigma_min.unwrap(), lo, hi) && within(r.inverse_sigma_max.unwrap(), lo, hi), "case {i}");
        assert_eq!(r.conclusion_holds, Some(true));
    }
    assert!(certified >= 50, "{certified} certified");
}
