use std::process::{Command, Output};

use serde_json::Value;

fn pgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pgal(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn single_point_curvature() {
    let r = json(&[
        "curvature",
        "--type",
        "I",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(2)",
        "--grid",
        "v1=1:1:1,v2=1:1:1",
    ]);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!((f(&rows[0]["K"]) - 4.0 / 3.0).abs() <= 1e-10);
    assert!((f(&rows[0]["W"]) - 3f64.sqrt()).abs() <= 1e-12);
    assert_eq!(rows[0]["valid"], Value::Bool(true));
    assert_eq!(r["meta"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn exponential_pair_rows_are_flagged_null_k() {
    let r = json(&["curvature", "--phi1", "exp(1,1)", "--phi2", "exp(1,1)"]);
    for row in r["rows"].as_array().unwrap() {
        assert!(f(&row["K"]).abs() <= 1e-10);
        assert_eq!(row["flag"], "null-K");
    }
    assert_eq!(r["summary"]["null_k_class"], "ExponentialPair");
}

#[test]
fn malformed_factor_exits_2() {
    let out = pgal(&["curvature", "--phi1", "exp(c=2", "--phi2", "pow(2)"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at offset 8"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["curvature", "--phi1", "pow(2)"][..],
        &[
            "curvature",
            "--phi1",
            "pow(2)",
            "--phi2",
            "pow(2)",
            "--grid",
            "v1=1:0:3,v2=0:1:3",
        ],
        &[
            "curvature",
            "--phi1",
            "pow(2)",
            "--phi2",
            "pow(2)",
            "--type",
            "IV",
        ],
        &[
            "curvature",
            "--phi1",
            "pow(2)",
            "--phi2",
            "pow(2)",
            "--out",
            "xml",
        ],
        &[
            "invariance",
            "--phi1",
            "pow(2)",
            "--phi2",
            "pow(2)",
            "--motion",
            "1,2",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(pgal(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(pgal(&["--help"]).status.code(), Some(0));
}

#[test]
fn laplacian_chain_identity_in_summary() {
    let r = json(&[
        "laplacian",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(2)",
        "--grid",
        "v1=0.5:1.5:20,v2=0.5:1.5:20",
    ]);
    let chain = &r["summary"]["chain_identity"];
    assert!(f(&chain["max_abs_residual"]) <= 1e-8);
    assert!(chain["points_checked"].as_u64().unwrap() > 300);
    assert!(r["summary"].get("eigen_fit").is_none());
    assert_eq!(r["rows"].as_array().unwrap().len(), 400);
}

#[test]
fn laplacian_fit_leaves_a_residual() {
    let r = json(&[
        "laplacian",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(2)",
        "--fit-lambda",
    ]);
    let res = r["summary"]["eigen_fit"]["rel_residual"]
        .as_array()
        .unwrap();
    assert!(res.iter().any(|x| f(x) >= 1e-3), "{res:?}");
}

#[test]
fn degenerate_pair_has_no_laplacian() {
    let r = json(&[
        "laplacian",
        "--phi1",
        "exp(1,1)",
        "--phi2",
        "exp(1,1)",
        "--grid",
        "v1=0.5:1.5:4,v2=0.5:1.5:4",
    ]);
    for row in r["rows"].as_array().unwrap() {
        assert_eq!(row["flag"], "DegenerateSecondForm");
        assert_eq!(row["valid"], Value::Bool(false));
        assert!(row["lap1"].is_null());
    }
    let notes = r["summary"]["notes"].to_string();
    assert!(notes.contains("Δ^II undefined"), "{notes}");
}

#[test]
fn single_case_audit() {
    let out = pgal(&["audit", "I.2"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let a = &r["summary"]["audits"][0];
    assert_eq!(a["case_id"], "I.2");
    assert_eq!(a["confirmed"], Value::Bool(true));
    assert!(f(&a["evidence"]["max_abs_d"]) <= 1e-9);
    assert_eq!(r["summary"]["confirmed"], "1/1");
}

#[test]
fn unknown_case_exits_2() {
    assert_eq!(pgal(&["audit", "I.9"]).status.code(), Some(2));
    assert_eq!(pgal(&["audit", "--case", "IV.1"]).status.code(), Some(2));
}

#[test]
fn audit_exit_code_tracks_confirmation() {
    let out = pgal(&["audit", "III.3"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let confirmed = r["summary"]["audits"][0]["confirmed"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if confirmed { 0 } else { 3 }));
}

#[test]
fn params_file_overrides_family() {
    let dir = std::env::temp_dir().join(format!("pgal-params-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.txt");
    std::fs::write(&path, "# scoped override\nI.3:s1 = 0.5\n").unwrap();
    let out = pgal(&["audit", "I.3", "--params", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&path, "I.3:s1 = -1   # other branch\n").unwrap();
    let out = pgal(&["audit", "I.3", "--params", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        pgal(&["audit", "I.3", "--params", "/nonexistent/p.txt"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identity_motion_changes_nothing() {
    let r = json(&[
        "invariance",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(2)",
        "--motion",
        "0,0,0,0,0,0",
    ]);
    for row in r["rows"].as_array().unwrap() {
        if row["valid"] == Value::Bool(true) {
            for key in ["dK", "dH", "dW"] {
                assert_eq!(f(&row[key]), 0.0, "{key}");
            }
        }
    }
}

#[test]
fn random_motion_preserves_curvature() {
    let r = json(&[
        "invariance",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(2)",
        "--seed",
        "5",
        "--grid",
        "v1=1:1.5:10,v2=0.8:1.5:10",
    ]);
    let s = &r["summary"]["invariance"];
    assert_eq!(s["points_compared"], 100);
    for x in s["max_rel"].as_array().unwrap() {
        assert!(f(x) <= 1e-9, "{x}");
    }
}

#[test]
fn large_angle_is_noted() {
    let r = json(&[
        "invariance",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(2)",
        "--motion",
        "1,-2,0.5,3,-1,5",
        "--grid",
        "v1=1:1.5:10,v2=0.8:1.5:10",
    ]);
    for x in r["summary"]["invariance"]["max_rel"].as_array().unwrap() {
        assert!(f(x) <= 1e-8, "{x}");
    }
    assert!(r["summary"]["notes"]
        .to_string()
        .contains("large hyperbolic angle"));
}

#[test]
fn csv_matches_json() {
    let args = [
        "laplacian",
        "--phi1",
        "cosh(1,1,0)",
        "--phi2",
        "pow(3)",
        "--grid",
        "v1=0.2:1.4:5,v2=0.3:1.2:4",
    ];
    let j = json(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--out", "csv"]);
    let out = pgal(&csv_args);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = j["rows"].as_array().unwrap();
    let keys: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
    let mut sorted_header = header.clone();
    sorted_header.sort();
    let mut sorted_keys = keys.clone();
    sorted_keys.sort();
    assert_eq!(sorted_header, sorted_keys);
    let records: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(rows) {
        for (name, cell) in header.iter().zip(rec.iter()) {
            let v = &row[name.as_str()];
            match v {
                Value::Null => assert_eq!(cell, "", "{name}"),
                Value::Number(n) => {
                    assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap(), "{name}");
                    assert_eq!(cell, n.to_string(), "{name}");
                }
                Value::Bool(b) => assert_eq!(cell, b.to_string()),
                Value::String(s) => assert_eq!(cell, s),
                other => panic!("{name}: {other}"),
            }
        }
    }
}

#[test]
fn rows_are_in_grid_order() {
    let r = json(&[
        "curvature",
        "--phi1",
        "pow(2)",
        "--phi2",
        "pow(3)",
        "--grid",
        "v1=0.5:1.5:3,v2=0.5:1.5:4",
    ]);
    let ij: Vec<(u64, u64)> = r["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["i"].as_u64().unwrap(), r["j"].as_u64().unwrap()))
        .collect();
    let mut sorted = ij.clone();
    sorted.sort();
    assert_eq!(ij, sorted);
    assert_eq!(ij.len(), 12);
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("pgal-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let out = pgal(&["audit", "I.6", "--seed", "3", "-o", p.to_str().unwrap()]);
        assert!(out.stdout.is_empty());
        assert!(matches!(out.status.code(), Some(0 | 3)));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    std::fs::remove_dir_all(&dir).ok();
    let strip = |v: &[u8]| {
        let mut j: Value = serde_json::from_slice(v).unwrap();
        j["meta"]["command"] = Value::Null;
        j
    };
    assert_eq!(strip(&x), strip(&y));
}
