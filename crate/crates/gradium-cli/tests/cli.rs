mod common;

use std::path::PathBuf;

use common::{assert_valid, gradium, schema};

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn run_tick2_reports_effect_two() {
    let out = gradium(&["run", "corpus/tick2.cbpv", "--system", "effect", "--algebra", "nat-cost", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = out.json();
    assert_eq!(v["effect"], "2");
    assert_eq!(v["terminal"], "return ()");
}

#[test]
fn tick2_exceeds_bound_one() {
    let out = gradium(&["check", "corpus/tick2.cbpv", "--expect-effect", "1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("[eff-sub]"), "{}", out.stderr);
}

#[test]
fn box_translation_checks() {
    let out = gradium(&["translate", "corpus/box.lam", "--dialect", "cbn-co", "--check"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("return^2 {x!}"), "{}", out.stdout);
}

#[test]
fn human_output_is_deterministic() {
    let a = gradium(&["run", "corpus/iso_from.cbpv"]);
    let b = gradium(&["run", "corpus/iso_from.cbpv"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn type_errors_name_the_rule() {
    let out = gradium(&["check", "corpus/dup_under.cbpv"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("[coeff-abs]"), "{}", out.stderr);
    let f = scratch("unbound.cbpv", "-- mode: coeffect\nreturn^1 ()!\n");
    let out = gradium(&["check", &f, "--json"]);
    assert_eq!(out.code, 1);
    assert!(out.json()["error"]["rule"].is_string());
}

#[test]
fn parse_errors_carry_positions() {
    let f = scratch("bad.cbpv", "let x <- tick in\n");
    let out = gradium(&["check", &f, "--json"]);
    assert_eq!(out.code, 1);
    let v = out.json();
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 2);
}

#[test]
fn budget_exhaustion_is_a_defect() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_gradium"))
        .args(["run", "corpus/tick2.cbpv", "--json"])
        .current_dir(common::root())
        .env("GRADIUM_STEP_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "defect");
    assert_eq!(v["error"]["rule"], "budget");
    assert_valid(&schema(), &v);
}

#[test]
fn bad_flags_are_user_errors() {
    assert_eq!(gradium(&["check", "corpus/tick2.cbpv", "--bogus"]).code, 1);
    assert_eq!(gradium(&["run"]).code, 1);
    assert_eq!(gradium(&["check", "corpus/tick2.cbpv", "--algebra", "reals"]).code, 1);
    assert_eq!(gradium(&["check", "corpus/missing.cbpv"]).code, 1);
    assert_eq!(gradium(&["soundness", "--suite", "nope"]).code, 1);
    assert_eq!(gradium(&["soundness", "--suite", "eff-sound", "--algebra", "nat-usage", "--trials", "1"]).code, 1);
    assert_eq!(gradium(&["soundness", "--suite", "determinism", "--algebra", "nat-usage", "--trials", "3"]).code, 0);
    assert_eq!(gradium(&["--help"]).code, 0);
}

#[test]
fn resource_run_with_junk() {
    let out = gradium(&[
        "run", "corpus/junk.cbpv", "--system", "resource", "--env", "x=(),y=<junk>", "--grades", "x=1,y=0", "--usage", "--json",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = out.json();
    assert_eq!(v["terminal"], "return^1 ()");
    assert_eq!(v["usage"][1]["used"], 0);
}

#[test]
fn grades_below_demand_are_rejected() {
    let out = gradium(&["run", "corpus/return3.cbpv", "--system", "coeffect", "--grades", "x=2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("coeff-sub"), "{}", out.stderr);
}

#[test]
fn env_values_are_type_checked() {
    let f = scratch("pairctx.cbpv", "-- mode: coeffect\n-- context: p : Unit * Unit\ncase^1 p of (a, b) -> return^1 a\n");
    let ok = gradium(&["run", &f, "--env", "p=((), ())", "--json"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    let bad = gradium(&["run", &f, "--env", "p=()", "--json"]);
    assert_eq!(bad.code, 1);
    assert_eq!(bad.json()["error"]["kind"], "type");
}

#[test]
fn soundness_suites_pass_small_runs() {
    let schema = schema();
    for suite in ["determinism", "eff-sound", "subeff", "co-sound", "res-sound", "subcoeff", "preserve-cbv-co"] {
        let out = gradium(&["soundness", "--suite", suite, "--trials", "20", "--seed", "7", "--json"]);
        assert_eq!(out.code, 0, "{suite}: {}", out.stdout);
        let v = out.json();
        assert_valid(&schema, &v);
        assert_eq!(v["passed"], 20, "{suite}");
    }
}

/// Every output shape, success or failure, validates.
#[test]
fn every_code_path_validates() {
    let schema = schema();
    let bad = scratch("bad2.cbpv", "return (\n");
    let lam_bad = scratch("bad.lam", "-- dialect: cbv-co\n\\x^1 : Unit. (x, x)\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", "corpus/tick2.cbpv", "--json"],
        vec!["check", "corpus/tick2.cbpv", "--expect-effect", "1", "--json"],
        vec!["check", "corpus/return3.cbpv", "--expect-grades", "x=4", "--json"],
        vec!["check", "corpus/return3.cbpv", "--expect-grades", "y=4", "--json"],
        vec!["check", "corpus/return3.cbpv", "--expect-effect", "1", "--json"],
        vec!["check", &bad, "--json"],
        vec!["check", "--json"],
        vec!["run", "corpus/tick_choice.cbpv", "--json"],
        vec!["run", "corpus/return0.cbpv", "--system", "resource", "--usage", "--json"],
        vec!["run", "corpus/return3.cbpv", "--system", "resource", "--algebra", "nat-exact", "--json"],
        vec!["run", "corpus/return3.cbpv", "--algebra", "zero-one-many", "--usage", "--json"],
        vec!["run", "corpus/tick2.cbpv", "--usage", "--json"],
        vec!["run", "corpus/junk.cbpv", "--env", "z=()", "--json"],
        vec!["translate", "corpus/unbox.lam", "--json"],
        vec!["translate", "corpus/unbox.lam", "--check", "--json"],
        vec!["translate", &lam_bad, "--check", "--json"],
        vec!["translate", "corpus/tick2.cbpv", "--json"],
        vec!["soundness", "--suite", "preserve-cbv-eff", "--trials", "5", "--json"],
        vec!["soundness", "--suite", "canonical", "--algebra", "zero-one-many", "--json"],
        vec!["soundness", "--suite", "subcoeff", "--algebra", "nat-exact", "--trials", "5", "--json"],
    ];
    for args in runs {
        let out = gradium(&args);
        let v = out.json();
        assert_valid(&schema, &v);
        let ok = v["status"] == "ok";
        assert_eq!(ok, out.code == 0, "{args:?}: {v}");
    }
}
