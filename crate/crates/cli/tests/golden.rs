mod common;

use common::{framelab, golden_path, run_golden, verdict_of, GOLDEN};

/// Set `UPDATE_GOLDEN=1` to rewrite the committed reports.
#[test]
fn reports_match_goldens() {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut mismatched = Vec::new();
    for &(name, args, code) in GOLDEN {
        let out = run_golden(args);
        assert_eq!(out.code, code, "{name}: {}\n{}", out.stdout, out.stderr);
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        if want != out.stdout {
            mismatched.push(name);
        }
    }
    assert!(mismatched.is_empty(), "reports differ from goldens: {mismatched:?}");
}

#[test]
fn human_output_keeps_the_verdict() {
    for &(name, args, code) in GOLDEN {
        let json = run_golden(args);
        let mut human_args = vec!["--human"];
        human_args.extend_from_slice(args);
        let human = run_golden(&human_args);
        assert_eq!(json.code, human.code, "{name}");
        let (verdict, exit) = verdict_of(&json.stdout);
        assert_eq!(exit, i64::from(code));
        let header = format!("framelab {}: {} (exit {code})", args[0], verdict.to_uppercase());
        assert!(human.stdout.starts_with(&header), "{name}: {}", human.stdout.lines().next().unwrap_or(""));
    }
}

#[test]
fn generated_files_match_committed_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = framelab(&["gen", "--fixture", "FIX-R07", "--out", "gen"], dir.path(), &[]);
    assert_eq!(out.code, 0);
    let (doc, oracle) = framelab_core::fixtures::committed("FIX-R07").unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("gen/FIX-R07.json")).unwrap(), doc);
    assert_eq!(std::fs::read_to_string(dir.path().join("gen/FIX-R07.oracle.json")).unwrap(), oracle);
}
