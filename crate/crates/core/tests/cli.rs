//! Scenario parsing, bundled demos and the command-line binary.

use std::process::Command;

use hypertate::cli::run::run_scenario;
use hypertate::cli::scenarios::DEMOS;
use hypertate::cli::spec::{parse_scenario, to_json, validate, Options, Settings};
use hypertate::Error;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypertate"))
}

fn scenario_file(text: &str) -> tempfile_path::TempPath {
    tempfile_path::TempPath::new(text)
}

mod tempfile_path {
    use std::path::PathBuf;
    use std::sync::atomic::{AtomicUsize, Ordering};

    static NEXT: AtomicUsize = AtomicUsize::new(0);

    pub struct TempPath(pub PathBuf);

    impl TempPath {
        pub fn new(text: &str) -> TempPath {
            let id = NEXT.fetch_add(1, Ordering::SeqCst);
            let p = std::env::temp_dir().join(format!("hypertate-cli-{}-{id}.json", std::process::id()));
            std::fs::write(&p, text).unwrap();
            TempPath(p)
        }
    }

    impl Drop for TempPath {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.0);
        }
    }
}

#[test]
fn bundled_scenarios_round_trip() {
    assert!(DEMOS.len() >= 8);
    for d in DEMOS {
        let spec = d.spec();
        let again = parse_scenario(&to_json(&spec)).unwrap();
        assert_eq!(spec, again, "{}", d.name);
    }
}

#[test]
fn bundled_scenarios_reach_expected_verdicts() {
    for d in DEMOS {
        let spec = d.spec();
        let settings = Settings::resolve(&spec.options, &Options::default());
        let report = run_scenario(&spec, &settings).unwrap();
        assert_eq!(d.check(&report.body), Vec::<String>::new(), "{}", d.name);
    }
}

#[test]
fn parse_errors_name_the_field() {
    let text = r#"{"group": {"cyclic": 3}, "coefficients": {"module": {"module": {"trivial": "x"}}}, "analyses": []}"#;
    let e = parse_scenario(text).unwrap_err().to_string();
    assert!(e.contains("coefficients.module.module.trivial"), "{e}");
    let text = r#"{"group": {"cyclic": 3}, "coefficients": {"module": {"module": "regular"}}, "analyses": [], "colour": 1}"#;
    let e = parse_scenario(text).unwrap_err().to_string();
    assert!(e.contains("colour"), "{e}");
}

#[test]
fn oversized_groups_are_refused() {
    let spec = parse_scenario(
        r#"{"group": {"symmetric": 5}, "coefficients": {"module": {"module": {"trivial": 0}}}, "analyses": ["tate"]}"#,
    )
    .unwrap();
    let settings = Settings::resolve(&spec.options, &Options::default());
    assert!(matches!(validate(&spec, &settings), Err(Error::CapExceeded { .. })));
}

#[test]
fn invalid_actions_are_rejected() {
    let spec = parse_scenario(
        r#"{"group": {"cyclic": 2}, "coefficients": {"module": {"module": {"explicit": {"gens": 1, "action": [[[1]], [[2]]]}}}}, "analyses": ["tate"]}"#,
    )
    .unwrap();
    let settings = Settings::resolve(&spec.options, &Options::default());
    assert!(matches!(validate(&spec, &settings), Err(Error::InvalidModule(_))));
}

#[test]
fn binary_exit_codes() {
    let ok = scenario_file(
        r#"{"group": {"cyclic": 3}, "coefficients": {"module": {"module": {"trivial": 0}}}, "analyses": ["tate"]}"#,
    );
    let out = bin().args(["run", ok.0.to_str().unwrap(), "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["analyses"][0]["degrees"][2]["group"], "Z/3");
    assert!(!String::from_utf8_lossy(&out.stdout).contains("timing"));

    let out = bin().args(["run", ok.0.to_str().unwrap(), "--window", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));

    let out = bin().args(["run", ok.0.to_str().unwrap(), "--range", "-4..4", "--engine", "bar"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = bin().args(["run", ok.0.to_str().unwrap(), "--range", "3..1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let s3 = scenario_file(
        r#"{"group": {"symmetric": 3}, "coefficients": {"module": {"module": {"trivial": 0}}}, "analyses": ["tate"]}"#,
    );
    let out = bin().args(["run", s3.0.to_str().unwrap(), "--engine", "periodic"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let bad = scenario_file(r#"{"group": {"cyclic": 3}"#);
    let out = bin().args(["run", bad.0.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let big = scenario_file(
        r#"{"group": {"symmetric": 4}, "coefficients": {"module": {"module": {"trivial": 0}}}, "analyses": ["tate"]}"#,
    );
    let out = bin().args(["validate", big.0.to_str().unwrap(), "--max-order", "12"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["demo", "no-such-demo"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().arg("list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let listing = String::from_utf8_lossy(&out.stdout);
    assert!(DEMOS.iter().all(|d| listing.contains(d.name)));
}

#[test]
fn text_output_includes_timings() {
    let out = bin().args(["demo", "hilbert90-f4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("timing:"));
    assert!(text.contains("H^1"));
}

#[test]
fn unknown_analysis_is_named() {
    let text = r#"{"group": {"cyclic": 4}, "coefficients": {"module": {"module": {"trivial": 0}}}, "analyses": ["formation", "frobenius"]}"#;
    let e = parse_scenario(text).unwrap_err().to_string();
    assert!(e.contains("analyses[1]") && e.contains("frobenius"), "{e}");
}

#[test]
fn cap_is_stated_on_refusal() {
    let spec = parse_scenario(
        r#"{"group": {"product": [{"cyclic": 5}, {"cyclic": 6}]}, "coefficients": {"module": {"module": "regular"}}, "analyses": ["tate"]}"#,
    )
    .unwrap();
    let settings = Settings::resolve(&spec.options, &Options::default());
    let e = validate(&spec, &settings).unwrap_err().to_string();
    assert!(e.contains("30") && e.contains("24"), "{e}");
}

/// Set `UPDATE_GOLDEN=1` to rewrite the pinned reports.
#[test]
fn demo_reports_match_golden_files() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for d in DEMOS {
        let out = bin().args(["demo", d.name, "--format", "json"]).output().unwrap();
        assert!(out.status.success(), "{}", d.name);
        let path = dir.join(format!("{}.json", d.name));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let pinned = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(pinned == out.stdout, "{} differs from its golden report", d.name);
    }
}
