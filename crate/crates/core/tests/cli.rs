use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn metastab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metastab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn path(p: &Path) -> String {
    format!("@{}", p.display())
}

#[test]
fn refute_alternating_exits_1() {
    let out = metastab(&["refute", "--family", "alternating", "--horizon", "128", "--bound", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"]["status"], "REFUTED");
    assert_eq!(r["refutations"][0]["member_label"], "alt-prefix-22");
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn synth_constants_exits_0() {
    let out = metastab(&["synth", "--family", "const:0,1", "--epsilon", "1/10", "--horizon", "16"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["rates"][0]["outcome"]["e_star"], 1);
}

#[test]
fn prop23_small_instance() {
    let out = metastab(&["prop23", "--points", "4", "--horizon", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["uniform"][0]["result"]["outcome"]["e_star"], 6);
    let moduli: Vec<u64> = r["results"]["pointwise"][0]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["modulus"].as_u64().unwrap())
        .collect();
    assert_eq!(moduli, [0, 1, 3, 5]);

    let out = metastab(&["prop23", "--points", "4", "--horizon", "10", "--rate", "const:5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["refutations"][0]["member_label"], "3");
}

#[test]
fn certify_verdicts() {
    let out = metastab(&[
        "certify",
        "--family",
        "monotone01",
        "--horizon",
        "32",
        "--rate",
        "maxeta0plus1",
        "--sampling",
        "straddle:12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = metastab(&[
        "certify",
        "--family",
        "monotone01",
        "--horizon",
        "32",
        "--rate",
        "const:12",
        "--sampling",
        "straddle:12",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // a bound longer than the prefix cannot be checked
    let out = metastab(&[
        "certify",
        "--family",
        "alternating:8",
        "--horizon",
        "32",
        "--rate",
        "const:20",
        "--sampling",
        "pairs:10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["verdict"]["status"], "INCONCLUSIVE");
}

#[test]
fn errors_exit_above_2_and_name_the_field() {
    let out = metastab(&["certify", "--family", "zigzag", "--rate", "const:3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("family"));
    let out = metastab(&["refute", "--family", "monotone01"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));
    let out = metastab(&["synth", "--family", "expr:n +", "--horizon", "8"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("position 3"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sampling = dir.path().join("eta.json");
    let out = metastab(&[
        "gen-sampling",
        "--sampling",
        "straddle:5",
        "--horizon",
        "16",
        "--out",
        sampling.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&sampling).unwrap();
    assert!(text.starts_with("{\"levels\":[[0,5],[1,5]"), "{text}");

    let trace = dir.path().join("trace.csv");
    std::fs::write(&trace, "1,1,1,1,1,0,0,0\n0.5,0.25,0.125,0.0625,0.03125,0,0,0\n").unwrap();
    let out = metastab(&[
        "synth",
        "--family",
        &path(&trace),
        "--sampling",
        &path(&sampling),
        "--epsilon",
        "1/4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["results"]["family"]["horizon"], 8);
    // row 1 has spread 1 on {m, 5} for m < 5; row 2 has spread above 1/4 only at m = 0
    assert_eq!(r["results"]["rates"][0]["outcome"]["witness_levels"], serde_json::json!([5, 1]));

    let matrix = dir.path().join("matrix.csv");
    std::fs::write(&matrix, "a,b\n0,1\n1,1\n1,1\n0.5,1\n").unwrap();
    let out = metastab(&["prop23", "--points", "2", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = metastab(&["synth", "--family", &format!("matrix:{}", matrix.display()), "--sampling", "pairs"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["results"]["family"]["horizon"], 4);
    // point a: {0,1} spreads 1, {1,2} is flat
    assert_eq!(r["results"]["rates"][0]["outcome"]["witness_levels"], serde_json::json!([1, 0]));

    let exprs = dir.path().join("family.txt");
    std::fs::write(&exprs, "# geometric\n1/2^n\n\nmod(n, 2) / (n + 1)\n").unwrap();
    let out = metastab(&[
        "analyze",
        "--family",
        &path(&exprs),
        "--horizon",
        "16",
        "--refute-length",
        "2",
        "--epsilon",
        "1/3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["results"]["members"][0]["results"][0]["cauchy_index"], 2);
}

#[test]
fn out_file_is_stable_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (file, threads) in [(&a, "1"), (&b, "3")] {
        let out = metastab(&[
            "certify",
            "--family",
            "monotone01",
            "--horizon",
            "24",
            "--rate",
            "const:6",
            "--sampling",
            "random:12:5",
            "--sampling",
            "straddle:10",
            "--epsilon",
            "1/2",
            "--epsilon",
            "1/5",
            "--threads",
            threads,
            "--no-timing",
            "--out",
            file.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(1));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(!text.contains("timing"));
    for r in metastab::report::refutations_from_json(&text).unwrap() {
        assert!(r.replay_standalone());
    }
}

#[test]
fn logic_modulo_theory() {
    let dir = tempfile::tempdir().unwrap();
    let theory = dir.path().join("theory.txt");
    std::fs::write(&theory, "# value 1 exactly when p >= 1/2\ndotminus(1, dotminus(1/2, p))\n").unwrap();
    let sentences = dir.path().join("sentences.txt");
    std::fs::write(&sentences, "template: half^n(p)\n").unwrap();
    let out = metastab(&[
        "logic",
        "--sentences",
        &path(&sentences),
        "--theory",
        &path(&theory),
        "--epsilon",
        "1/10",
        "--horizon",
        "12",
        "--sampling",
        "pairs:8",
        "--grid-resolution",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["results"]["atoms"], serde_json::json!(["p"]));
    assert_eq!(r["results"]["analyses"][0]["analysis"]["models"], 6);
    // half^n(p) <= 2^-n, so every level from 4 on has spread below 1/10
    let e_star = r["results"]["analyses"][0]["analysis"]["outcome"]["uniform"]["outcome"]["e_star"]
        .as_u64()
        .unwrap();
    assert!(e_star <= 5, "{e_star}");

    // no grid valuation gives value 1 to 1/2 dotminus p: empty class, inconclusive
    let out = metastab(&[
        "logic",
        "--sentences",
        "p; neg(p)",
        "--theory",
        "dotminus(1/2, p)",
        "--horizon",
        "2",
        "--sampling",
        "pairs:1",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        report(&out)["results"]["analyses"][0]["analysis"]["outcome"]["status"],
        "empty-model-class"
    );
}
