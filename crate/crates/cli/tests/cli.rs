use std::process::{Command, Output};

use serde_json::Value;

fn unigraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unigraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = unigraph(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), doc)
}

#[test]
fn sums_verify_passes_over_zmod9() {
    let (code, doc) = report(&["sums-verify", "--ring", "GR(3,2,1)", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["extension"]["characters"], 72);
}

#[test]
fn spectrum_verify_um_over_gf3() {
    let (code, doc) = report(&[
        "spectrum-verify",
        "--ring",
        "GF(3)",
        "--family",
        "um",
        "--n",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["graph"], "Um(GF(3)^2)");
    assert!(doc["unmatched"].as_array().unwrap().is_empty());
}

#[test]
fn spectrum_verify_platonic_product() {
    let (code, doc) = report(&[
        "spectrum-verify",
        "--ring",
        "Zmod(15)",
        "--family",
        "platonic",
    ]);
    assert_eq!(code, 0, "{doc}");
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let (code, doc) = report(&[
        "spectrum-verify",
        "--ring",
        "GF(3)",
        "--n",
        "2",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["pass"], false);
}

#[test]
fn ramanujan_set_up_to_45() {
    let (code, doc) = report(&["ramanujan", "--max", "45"]);
    assert_eq!(code, 0);
    let set: Vec<u64> = doc["ramanujan_set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(set, [9, 15, 21, 27, 33]);
}

#[test]
fn edge_list_of_um_gf3() {
    let out = unigraph(&["graph-build", "--ring", "GF(3)", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# vertices 16 degree 3"));
    assert_eq!(lines.count(), 24);
}

#[test]
fn csv_counting_has_one_row_per_trial() {
    let out = unigraph(&[
        "counting-sweep",
        "--ring",
        "Zmod(9)",
        "--n",
        "2",
        "--trials",
        "12",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap().get(0), Some("trial"));
    assert_eq!(rdr.records().count(), 12);
}

#[test]
fn iso_um0_gf3_4_is_exact() {
    let (code, doc) = report(&["iso", "--ring", "GF(3)", "--n", "4", "--family", "um0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["trace_realization_certified"], true);
    let r = &doc["report"];
    assert!((r["lower"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert!((r["upper"].as_f64().unwrap() - 5.0).abs() < 1e-9);
}

#[test]
fn reproduce_selected_criterion() {
    let (code, doc) = report(&["reproduce-all", "--only", "product"]);
    assert_eq!(code, 0);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["key"], "product");
}

#[test]
fn out_file_holds_report_and_stdout_the_summary() {
    let dir = std::env::temp_dir().join(format!("unigraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ring.json");
    let out = unigraph(&[
        "ring-info",
        "--ring",
        "Zmod(45)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("Zmod(45): 45 elements, 24 units"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["factors"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_and_library_errors_exit_two() {
    assert_eq!(unigraph(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        unigraph(&["ring-info", "--ring", "Zmod(12)"]).status.code(),
        Some(2)
    );
    assert_eq!(
        unigraph(&["spectrum", "--ring", "GF(3)", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        unigraph(&["reproduce-all", "--only", "nothing"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "counting-sweep",
            "--ring",
            "GF(5)",
            "--n",
            "2",
            "--trials",
            "8",
            "--seed",
            "7",
        ][..],
        &["spectrum", "--ring", "Zmod(9)", "--family", "platonic"][..],
        &["chars", "--ring", "GR(3,1,2)"][..],
    ] {
        assert_eq!(unigraph(args).stdout, unigraph(args).stdout, "{args:?}");
    }
}
