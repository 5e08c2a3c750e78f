use std::path::PathBuf;
use std::process::Command;

use ncreg::cli::run;
use serde_json::{json, Value};

fn corpus(file: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file);
    p.to_string_lossy().into_owned()
}

fn ncreg(args: &[&str]) -> ncreg::cli::Output {
    run(std::iter::once("ncreg").chain(args.iter().copied()))
}

fn json_of(args: &[&str]) -> Value {
    let out = ncreg(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn betti_csv_for_the_polynomial_ring() {
    let out = ncreg(&[
        "betti",
        "--algebra",
        &corpus("poly2.alg"),
        "--max-hom",
        "3",
        "--max-deg",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "i,0,1,2,3\n0,1,0,0,0\n1,0,2,0,0\n2,0,0,1,0\n3,0,0,0,0\n"
    );
}

#[test]
fn betti_json_golden() {
    let v = json_of(&[
        "betti",
        "--algebra",
        &corpus("poly3.alg"),
        "--format",
        "json",
    ]);
    assert_eq!(
        v,
        json!({
            "schema": 1,
            "entries": [
                {"i": 0, "j": 0, "beta": 1},
                {"i": 1, "j": 1, "beta": 3},
                {"i": 2, "j": 2, "beta": 3},
                {"i": 3, "j": 3, "beta": 1},
            ],
            "max_deg": 8,
            "max_hom": 6,
            "pd_exact": true,
            "projective_dimension": 3,
            "terminated": true,
        })
    );
}

#[test]
fn hilbert_json_golden() {
    let v = json_of(&[
        "hilbert",
        "--algebra",
        &corpus("cubic_as3.alg"),
        "--max-deg",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(
        v,
        json!({"schema": 1, "lo": 0, "hi": 6, "dims": [1, 2, 4, 6, 9, 12, 16]})
    );
}

#[test]
fn classify_reports_type_and_schema() {
    let v = json_of(&["classify", "--algebra", &corpus("dual_numbers.alg")]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "gorenstein");
    assert_eq!(
        (v["d"].clone(), v["l"].clone(), v["standard"].clone()),
        (json!(0), json!(-1), json!(false))
    );
    let v = json_of(&[
        "classify",
        "--algebra",
        &corpus("cubic_as3.alg"),
        "--max-deg",
        "10",
        "--max-hom",
        "5",
    ]);
    assert_eq!(v["verdict"], "regular");
    assert_eq!((v["d"].clone(), v["l"].clone()), (json!(3), json!(4)));
    assert_eq!(v["certification"]["exact"], true);
}

#[test]
fn normal_form_uses_the_basis() {
    let out = ncreg(&["nf", "--algebra", &corpus("poly2.alg"), "y*x*y - x*y^2"]);
    assert_eq!((out.code, out.stdout.trim()), (0, "0"));
    let out = ncreg(&["nf", "--algebra", &corpus("exterior2.alg"), "y*x"]);
    assert_eq!((out.code, out.stdout.trim()), (0, "-x*y"));
}

#[test]
fn regularity_commands() {
    let out = ncreg(&[
        "cm-reg",
        "--algebra",
        &corpus("exterior2.alg"),
        "--module",
        "free",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("CM.reg = 2"), "{}", out.stdout);
    let out = ncreg(&[
        "ext-reg",
        "--algebra",
        &corpus("poly3.alg"),
        "--module",
        "trivial",
    ]);
    assert_eq!((out.code, out.stdout.trim()), (0, "ext_reg = 0"));
    let v = json_of(&[
        "depth",
        "--algebra",
        &corpus("poly3.alg"),
        "--module",
        "free",
        "--format",
        "json",
    ]);
    assert_eq!(
        (v["depth"]["value"].clone(), v["depth"]["certified"].clone()),
        (json!(3), json!(true))
    );
}

#[test]
fn exit_codes() {
    assert_eq!(ncreg(&["betti", "--algebra", "/nonexistent.alg"]).code, 2);
    assert_eq!(ncreg(&["verify", "--suite", "nope"]).code, 2);
    assert_eq!(ncreg(&["frobnicate"]).code, 2);
    assert_eq!(
        ncreg(&[
            "betti",
            "--algebra",
            &corpus("poly2.alg"),
            "--module",
            "sample:x"
        ])
        .code,
        2
    );
    // Ext.reg of this module is only a lower bound in the default window
    let out = ncreg(&[
        "ext-reg",
        "--algebra",
        &corpus("exterior2.alg"),
        "--module",
        "sample:0",
    ]);
    assert_eq!((out.code, out.stdout.trim()), (3, "ext_reg = >= 0"));
    let out = ncreg(&[
        "basis",
        "--algebra",
        &corpus("cubic_as3.alg"),
        "--budget",
        "1",
    ]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("budget"));
}

#[test]
fn module_files_resolve_their_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("q.alg");
    std::fs::write(&alg, "field Q;\ngens x:1 y:1;\nrels y*x - 1/3*x*y;\n").unwrap();
    let m = dir.path().join("m.mod");
    std::fs::write(&m, "algebra q.alg;\ncover 0;\nrel 0: x;\n").unwrap();
    let m = m.to_string_lossy().into_owned();
    let v = json_of(&["betti", "--module", &m, "--format", "json"]);
    assert_eq!(
        v["entries"],
        json!([{"i": 0, "j": 0, "beta": 1}, {"i": 1, "j": 1, "beta": 1}])
    );
    let v = json_of(&[
        "hilbert",
        "--module",
        &m,
        "--max-deg",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(v["dims"], json!([1, 1, 1, 1]));
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_string_lossy().into_owned();
    for cmd in ["betti", "classify", "hilbert"] {
        let args = [
            cmd,
            "--algebra",
            &corpus("cubic_as3.alg"),
            "--max-deg",
            "9",
            "--max-hom",
            "4",
            "--format",
            "json",
        ];
        let plain = ncreg(&args);
        let mut cached_args = args.to_vec();
        cached_args.extend(["--cache-dir", &cache]);
        let first = ncreg(&cached_args);
        let second = ncreg(&cached_args);
        assert_eq!(plain, first);
        assert_eq!(first, second);
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn binary_verify_is_deterministic() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ncreg"))
            .args([
                "verify",
                "--suite",
                "romer-formula,euler-characteristic",
                "--seed",
                "7",
                "--format",
                "json",
            ])
            .args(["--corpus", &corpus("")])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["summary"]["fail"], 0);
    let ids: Vec<_> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["romer-formula", "euler-characteristic"]);
}
