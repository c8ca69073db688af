use std::fs;
use std::path::{Path, PathBuf};

use framelab_core::duality::{
    canonical_dual, check_identity_tg1, check_identity_ti1, check_three_quarters,
    complement_residual, construct_q_dual, qdual_bound_corollary, verify_kgf_dual, verify_q_dual,
    KGFDualPair,
};
use framelab_core::fixtures::{self, RandomSpec};
use framelab_core::frame_ops::{parseval_operator, verify_k_g_fusion};
use framelab_core::perturbation::{
    perturb_hypothesis, scaled_operators, verify_perturbation_theorem, PerturbationMode,
    PerturbationParams,
};
use framelab_core::probes::{probe_vectors, subsets};
use framelab_core::suites::{self, SuiteName};
use framelab_core::{
    oracle, Field, Fixture, FrameBounds, FrameDocument, FrameError, LocalOperator,
    Result, ToleranceProfile,
};
use serde_json::json;

use crate::report::Report;
use crate::{AnalyzeArgs, Cli, Command, DualArgs, DualMethod, FieldArg, GenArgs, IdentitiesArgs, PerturbArgs};

/// Subsets are enumerated exhaustively up to this many members.
const IDENTITY_EXHAUSTIVE: usize = 10;
const IDENTITY_SAMPLED: usize = 256;
const PROBE_SEED: u64 = 0;

pub fn dispatch(cli: &Cli) -> Report {
    let name = match &cli.command {
        Command::Analyze(_) => "analyze",
        Command::Dual(_) => "dual",
        Command::Identities(_) => "identities",
        Command::Perturb(_) => "perturb",
        Command::Gen(_) => "gen",
    };
    let tol = match tolerance(cli) {
        Ok(t) => t,
        Err(e) => return Report::new(name, ToleranceProfile::default()).failed_with(&e),
    };
    let mut report = Report::new(name, tol);
    let outcome = match &cli.command {
        Command::Analyze(a) => analyze(a, &tol, &mut report),
        Command::Dual(a) => dual(a, &tol, &mut report),
        Command::Identities(a) => identities(a, &tol, &mut report),
        Command::Perturb(a) => perturb(a, &tol, &mut report),
        Command::Gen(a) => gen(a, &tol, &mut report),
    };
    match outcome {
        Ok(()) => report.finish(),
        Err(e) => report.failed_with(&e),
    }
}

fn tolerance(cli: &Cli) -> Result<ToleranceProfile> {
    let d = ToleranceProfile::default();
    ToleranceProfile::new(cli.tol_abs.unwrap_or(d.tau_abs), cli.tol_rel.unwrap_or(d.tau_rel))
}

fn read_text(source: &str) -> Result<String> {
    if let Ok((doc, _)) = fixtures::committed(source) {
        return Ok(doc.to_string());
    }
    fs::read_to_string(source).map_err(|e| FrameError::Input(format!("cannot read {source}: {e}")))
}

fn load(source: &str, tol: &ToleranceProfile) -> Result<(FrameDocument, Fixture)> {
    let doc = FrameDocument::parse(&read_text(source)?)?;
    let mut fixture = doc.fixture(tol)?;
    if doc.name.is_none() {
        fixture.name = source.to_string();
    }
    Ok((doc, fixture))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| FrameError::Input(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| FrameError::Input(format!("cannot write {}: {e}", path.display())))
}

fn analyze(args: &AnalyzeArgs, tol: &ToleranceProfile, report: &mut Report) -> Result<()> {
    report.arg("document", &args.document);
    report.arg("k", &args.k);
    report.arg("bounds", &args.bounds);
    let (_, fx) = load(&args.document, tol)?;
    let k = fx.operator(&args.k)?;
    let claimed = args.bounds.as_ref().map(|b| FrameBounds::new(b[0], b[1]));
    let frame = verify_k_g_fusion(&fx.system, k, claimed, tol)?;
    report.result("frame", frame);
    if let Some(c) = frame.claimed {
        report.check("claimed lower bound", c.lower_holds, None);
        report.check("claimed upper bound", c.upper_holds, None);
    }
    if !frame.is_frame {
        report.note(format!("not a frame for {}: R(k) is not contained in R(T)", args.k));
    }
    if fx.name == "FIX-A" && args.k == "u" && frame.is_frame {
        report.erratum(json!({
            "id": "E1",
            "fixture": "FIX-A",
            "operator": "u",
            "claim": "(W_j, Λ_j, v_j) is not a u-g-fusion frame",
            "status": "contradicted",
            "measured_a_op": frame.optimal.lower,
            "measured_b_op": frame.optimal.upper,
        }));
    }
    Ok(())
}

fn dual(args: &DualArgs, tol: &ToleranceProfile, report: &mut Report) -> Result<()> {
    report.arg("document", &args.document);
    report.arg("k", &args.k);
    report.arg("method", format!("{:?}", args.method).to_lowercase());
    report.arg("out", args.out.as_ref().map(|p| p.display().to_string()));
    let (_, fx) = load(&args.document, tol)?;
    let k = fx.operator(&args.k)?.clone();
    match args.method {
        DualMethod::Q => {
            let built = construct_q_dual(&fx.system, &k, tol)?;
            report.result("attempts", &built.attempts);
            report.result("reading", built.reading);
            let Some(_) = built.reading else {
                let best = built.attempts.iter().map(|a| a.residual).fold(f64::INFINITY, f64::min);
                report.check("construction residual", false, Some(best));
                for a in &built.attempts {
                    report.note(format!(
                        "{:?} reading: residual {:.3e}, well-definedness {:.3e}, dual subspace dims {:?}",
                        a.reading, a.residual, a.well_definedness_residual, a.dual_subspace_dims
                    ));
                }
                return Ok(());
            };
            let pair = &built.pair;
            let verification = verify_q_dual(pair, tol)?;
            let bounds = qdual_bound_corollary(pair, tol)?;
            report.check("construction residual", pair.is_certified(tol), Some(pair.residual));
            report.check("equivalence forms agree", verification.certified, Some(verification.forms_spread));
            report.check("dual is a k*-g-fusion frame", bounds.dual_is_frame, None);
            report.check("C_op >= 1/(B_op |Q|^2)", bounds.c_holds, None);
            report.result("verification", verification);
            report.result("bounds", bounds);
            if let Some(out) = &args.out {
                let doc = fixtures::fixture_document(
                    &Fixture {
                        name: format!("{}-qdual", fx.name),
                        system: pair.dual.clone(),
                        operators: fx.operators.clone(),
                    },
                    None,
                )
                .with_coupling(&pair.q);
                write(out, &doc.to_json())?;
            }
        }
        DualMethod::Canonical => {
            let pair = canonical_dual(&fx.system, &k, tol)?;
            let verification = verify_kgf_dual(&pair, tol)?;
            let invertible = k.is_invertible(tol);
            report.result("verification", verification);
            report.result("exploratory", !invertible);
            if invertible {
                report.check("operator residual", verification.certified, Some(verification.operator_residual));
                report.check("dual is a k*-g-fusion frame", verification.dual_frame.is_frame, None);
                report.check("dual lower bound >= 1/B", verification.predicted_lower_holds, None);
            } else {
                report.note(format!(
                    "exploratory: {} is not invertible; operator residual {:.6e} is recorded, not asserted",
                    args.k, verification.operator_residual
                ));
                report.erratum(json!({
                    "id": "canonical-dual-rank-deficient",
                    "fixture": fx.name,
                    "operator": args.k,
                    "operator_residual": verification.operator_residual,
                }));
            }
            if let Some(out) = &args.out {
                let doc = fixtures::fixture_document(
                    &Fixture {
                        name: format!("{}-canonical", fx.name),
                        system: pair.dual.clone(),
                        operators: fx.operators.clone(),
                    },
                    None,
                );
                write(out, &doc.to_json())?;
            }
        }
    }
    Ok(())
}

fn identities(args: &IdentitiesArgs, tol: &ToleranceProfile, report: &mut Report) -> Result<()> {
    report.arg("document", &args.document);
    report.arg("k", &args.k);
    report.arg("dual", &args.dual);
    report.arg("trials", args.trials);
    report.arg("parsevalize", args.parsevalize);
    let (_, fx) = load(&args.document, tol)?;
    let system = &fx.system;
    let k = if args.parsevalize {
        report.note("k replaced by S^{1/2}, which makes the system Parseval");
        parseval_operator(system, tol)?
    } else {
        fx.operator(&args.k)?.clone()
    };

    let count = system.len();
    let index_sets = subsets(count, IDENTITY_EXHAUSTIVE, IDENTITY_SAMPLED, PROBE_SEED);
    let probes = probe_vectors(system.dim(), system.space().field, args.trials, PROBE_SEED);
    report.result("subsets", index_sets.len());
    report.result("probes", probes.len());

    let pair = match &args.dual {
        Some(path) => {
            let (_, dual) = load(path, tol)?;
            Some(KGFDualPair::new(system.clone(), dual.system, k.clone())?)
        }
        None => match canonical_dual(system, &k, tol) {
            Ok(p) => Some(p),
            Err(FrameError::NotAFrame(msg)) => {
                report.note(format!("no canonical dual: {msg}"));
                None
            }
            Err(e) => return Err(e),
        },
    };
    if let Some(pair) = pair {
        report.result("dual_residual", pair.residual);
        if pair.is_certified(tol) {
            let (mut tg1, mut tg1_ok, mut partial) = (0.0_f64, true, 0.0_f64);
            for set in &index_sets {
                partial = partial.max(complement_residual(&pair, set)?);
                for f in &probes {
                    let c = check_identity_tg1(&pair, set, f, tol)?;
                    tg1 = tg1.max(c.residual);
                    tg1_ok &= c.holds;
                }
            }
            report.check("tg1 identity", tg1_ok, Some(tg1));
            report.check("S_I + S_Ic = k", partial <= tol.at_scale(k.norm()), Some(partial));
        } else if args.dual.is_some() {
            report.check("dual reproduces k", false, Some(pair.residual));
        } else {
            report.note(format!(
                "canonical dual is not certified (residual {:.6e}); tg1 skipped",
                pair.residual
            ));
        }
    }

    let frame = verify_k_g_fusion(system, &k, None, tol)?;
    if frame.is_parseval {
        let (mut ti1, mut ti1_ok) = (0.0_f64, true);
        let (mut slack, mut equality, mut tq_ok) = (f64::INFINITY, 0.0_f64, true);
        for set in &index_sets {
            let rest = framelab_core::probes::complement(count, set);
            let half: Vec<usize> = rest.iter().copied().step_by(2).collect();
            for f in &probes {
                for extra in [&[][..], &rest[..], &half[..]] {
                    let c = check_identity_ti1(system, &k, set, extra, f, tol)?;
                    ti1 = ti1.max(c.residual);
                    ti1_ok &= c.holds;
                }
                let q = check_three_quarters(system, &k, set, f, tol)?;
                slack = slack.min(q.slack);
                equality = equality.max(q.equality_residual);
                tq_ok &= q.holds;
            }
        }
        report.check("ti1 identity", ti1_ok, Some(ti1));
        report.check("3/4 inequality", tq_ok, Some(equality));
        report.result("three_quarters_min_slack", slack);
    } else {
        report.note(format!(
            "not Parseval for k (|S - kk*| = {:.6e}); ti1 and the 3/4 inequality skipped",
            frame.parseval_residual
        ));
    }
    Ok(())
}

fn parse_params(mode: PerturbationMode, pairs: &[String]) -> Result<PerturbationParams> {
    let mut p = PerturbationParams::zero(mode);
    for pair in pairs {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(FrameError::Input(format!("expected KEY=VALUE, got {pair:?}")));
        };
        let x: f64 = value
            .parse()
            .map_err(|_| FrameError::Input(format!("bad number in {pair:?}")))?;
        match key {
            "lambda1" => p.lambda1 = x,
            "lambda2" => p.lambda2 = x,
            "gamma" => p.gamma = x,
            "R" | "r" => p.r = x,
            _ => return Err(FrameError::Input(format!("unknown parameter {key:?}"))),
        }
    }
    p.validate()?;
    Ok(p)
}

fn perturb(args: &PerturbArgs, tol: &ToleranceProfile, report: &mut Report) -> Result<()> {
    report.arg("document", &args.document);
    report.arg("theta", &args.theta);
    report.arg("scale", args.scale);
    report.arg("k", &args.k);
    report.arg("mode", &args.mode);
    report.arg("params", &args.params);
    report.arg("require_hypothesis", args.require_hypothesis);
    let (_, fx) = load(&args.document, tol)?;
    let k = fx.operator(&args.k)?;
    let mode: PerturbationMode = args.mode.parse()?;
    let params = parse_params(mode, &args.params)?;
    let theta: Vec<LocalOperator> = match (&args.theta, args.scale) {
        (Some(path), _) => {
            let (_, t) = load(path, tol)?;
            t.system.members().iter().map(|m| m.operator.clone()).collect()
        }
        (None, Some(c)) => scaled_operators(&fx.system, c),
        (None, None) => return Err(FrameError::Input("either --theta or --scale is required".into())),
    };
    report.result("params", params);

    let hypothesis = perturb_hypothesis(&fx.system, &theta, k, &params, tol)?;
    report.result("hypothesis", &hypothesis);
    if hypothesis.falsified {
        report.result("status", "hypothesis falsified");
        report.note(format!(
            "hypothesis falsified: violation {:.6e} on subset {:?}",
            hypothesis.worst_violation, hypothesis.worst_subset
        ));
        if args.require_hypothesis {
            report.check("hypothesis holds", false, Some(hypothesis.worst_violation));
        }
        return Ok(());
    }
    let theorem = verify_perturbation_theorem(&fx.system, &theta, k, &params, tol)?;
    report.result("status", "hypothesis not falsified");
    report.check("theta is a k-g-fusion frame", theorem.theta.is_frame, None);
    if theorem.containment_asserted {
        report.check("predicted lower bound", theorem.lower_contained, None);
        report.check("predicted upper bound", theorem.upper_contained, None);
    }
    for e in &theorem.errata {
        report.erratum(e);
    }
    report.result("theorem", theorem);
    Ok(())
}

fn gen(args: &GenArgs, tol: &ToleranceProfile, report: &mut Report) -> Result<()> {
    report.arg("fixture", &args.fixture);
    report.arg("spec", &args.spec);
    report.arg("suite", &args.suite);
    report.arg("seed", args.seed);
    report.arg("out", args.out.display().to_string());
    let mut files: Vec<String> = Vec::new();
    let mut emit = |name: String, text: &str| -> Result<()> {
        let path: PathBuf = args.out.join(name);
        write(&path, text)?;
        files.push(path.display().to_string());
        Ok(())
    };
    if let Some(name) = &args.fixture {
        let (doc, oracle) = fixtures::regenerate(name)?;
        let (committed_doc, committed_oracle) = fixtures::committed(name)?;
        emit(format!("{name}.json"), &doc)?;
        emit(format!("{name}.oracle.json"), &oracle)?;
        report.check("document matches committed bytes", doc == committed_doc, None);
        report.check("oracle matches committed bytes", oracle == committed_oracle, None);
    } else if let Some(tokens) = &args.spec {
        let field = match args.field {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        };
        let spec = RandomSpec::parse(tokens, field)?;
        let seed = args.seed.unwrap_or(0);
        let name = args.name.clone().unwrap_or_else(|| format!("random-{seed}"));
        let fixture = fixtures::generate(&name, &spec, seed, tol)?;
        let doc = fixtures::fixture_document(&fixture, Some(seed)).to_json();
        let back = FrameDocument::parse(&doc)?.fixture(tol)?;
        report.check("document round-trips", back.system == fixture.system && back.operators == fixture.operators, None);
        emit(format!("{name}.json"), &doc)?;
        emit(format!("{name}.oracle.json"), &oracle::compute(&fixture, tol)?.to_json())?;
        report.result("local_dims", &spec.local_dims);
    } else if let Some(name) = &args.suite {
        let suite = SuiteName::parse(name)?;
        let text = suites::generate(suite).to_json();
        emit(format!("{name}.json"), &text)?;
        report.check("suite matches committed bytes", text == suite.committed(), None);
    }
    report.result("files", files);
    Ok(())
}
