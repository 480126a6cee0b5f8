//! Corpus programs against their `.expected.json` sidecars. Set
//! `GRADIUM_BLESS=1` to rewrite the recorded reports.

mod common;

use common::{assert_valid, gradium, root, schema, untimed};
use serde_json::Value;

#[test]
fn corpus_matches_sidecars() {
    let bless = std::env::var_os("GRADIUM_BLESS").is_some();
    let schema = schema();
    let mut sidecars: Vec<_> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".expected.json"))
        .collect();
    sidecars.sort();
    assert!(sidecars.len() >= 15, "corpus has only {} sidecars", sidecars.len());
    let mut mismatches = Vec::new();
    for path in sidecars {
        let mut cases: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for case in cases.iter_mut() {
            let args: Vec<String> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect();
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let out = gradium(&argv);
            let doc = out.json();
            assert_valid(&schema, &doc);
            let got = untimed(doc);
            if bless {
                case["exit"] = out.code.into();
                case["report"] = got;
                continue;
            }
            if case["exit"] != out.code || case["report"] != got {
                mismatches.push(format!(
                    "{}: `gradium {}`\n  expected exit {} {}\n  got exit {} {}",
                    path.display(),
                    args.join(" "),
                    case["exit"],
                    case["report"],
                    out.code,
                    got
                ));
            }
        }
        if bless {
            std::fs::write(&path, serde_json::to_string_pretty(&cases).unwrap() + "\n").unwrap();
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn every_corpus_program_has_a_sidecar() {
    for e in std::fs::read_dir(root().join("corpus")).unwrap() {
        let p = e.unwrap().path();
        let ext = p.extension().and_then(|x| x.to_str()).unwrap_or("");
        if ext == "cbpv" || ext == "lam" {
            let side = p.with_extension("expected.json");
            assert!(side.exists(), "{} has no sidecar", p.display());
        }
    }
}
