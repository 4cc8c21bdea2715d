use std::path::{Path, PathBuf};

use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::cargo_bin("perm-moments").unwrap();
    cmd.env_remove("PERM_MOMENTS_THREADS");
    cmd
}

fn write_csv(dir: &TempDir, name: &str, rows: &[(f64, f64)]) -> PathBuf {
    let path = dir.path().join(name);
    let mut body = String::from("x,y\n");
    for (x, y) in rows {
        body.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(&path, body).unwrap();
    path
}

/// Deterministic pseudo-normal rows from a small LCG plus Box-Muller.
fn gaussian_rows(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut uniform = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    };
    let mut normal = move || {
        let (u, v) = (uniform(), uniform());
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    };
    (0..n).map(|_| (normal(), normal())).collect()
}

fn run_json(args: &[&str], input: &Path) -> (Value, i32) {
    let out = bin().args(args).arg("--input").arg(input).output().unwrap();
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (json, code)
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(name: &str, instance: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(
        errors.is_empty(),
        "{name} report violates schema: {errors:?}"
    );
}

fn values(report: &Value) -> Vec<f64> {
    report["moments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["value"].as_f64().unwrap())
        .collect()
}

#[test]
fn moments_of_three_points() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
    let (report, code) = run_json(&["moments", "--k-max", "2"], &path);
    assert_eq!(code, 0);
    let v = values(&report);
    assert!(v[0].abs() < 1e-15);
    assert!((v[1] - 0.5).abs() < 1e-15);
    assert_eq!(report["n"], 3);
    assert_schema("moments", &report);
}

#[test]
fn second_moment_at_n_100() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(100, 7));
    let (report, code) = run_json(&["moments", "--k-max", "5"], &path);
    assert_eq!(code, 0);
    assert!((values(&report)[1] - 1.0 / 99.0).abs() < 1e-12);
    let methods: Vec<&str> = report["moments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert!(methods.iter().all(|m| *m == "closed-form"));
}

#[test]
fn auto_switches_to_induction_above_five() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(12, 3));
    let (report, code) = run_json(&["moments", "--k-max", "8", "--allow-high-order"], &path);
    assert_eq!(code, 0);
    let rows = report["moments"].as_array().unwrap();
    assert_eq!(rows[4]["method"], "closed-form");
    assert_eq!(rows[5]["method"], "induction");
    assert_schema("moments", &report);
}

#[test]
fn high_order_needs_acknowledgement() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(8, 3));
    let (_, code) = run_json(&["moments", "--k-max", "6"], &path);
    assert_eq!(code, 2);
}

#[test]
fn methods_agree_on_small_data() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(7, 11));
    let (base, _) = run_json(&["moments", "--method", "induction"], &path);
    for method in ["closed-form", "brute-force", "auto"] {
        let (other, code) = run_json(&["moments", "--method", method], &path);
        assert_eq!(code, 0);
        for (a, b) in values(&base).iter().zip(values(&other)) {
            assert!((a - b).abs() < 1e-12, "{method}: {a} vs {b}");
        }
    }
    let (mc, code) = run_json(
        &["moments", "--method", "monte-carlo", "--samples", "500"],
        &path,
    );
    assert_eq!(code, 0);
    assert_schema("moments", &mc);
    assert!(mc["moments"][1]["std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn non_numeric_cell_cites_row() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "x,y\n1,2\n2,oops\n3,1\n").unwrap();
    let out = bin()
        .args(["moments", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 3"), "{err}");
    assert!(err.contains("column y"), "{err}");
}

#[test]
fn exit_codes_by_error_class() {
    let dir = TempDir::new().unwrap();
    let constant = write_csv(&dir, "c.csv", &[(1.0, 5.0), (2.0, 5.0), (3.0, 5.0)]);
    for cmd in ["moments", "compare", "pvalue"] {
        let (_, code) = run_json(&[cmd], &constant);
        assert_eq!(code, 3, "{cmd}");
    }

    let missing = dir.path().join("missing.csv");
    assert_eq!(run_json(&["moments"], &missing).1, 2);

    let short = write_csv(&dir, "s.csv", &[(1.0, 2.0)]);
    assert_eq!(run_json(&["moments"], &short).1, 2);

    let ragged = dir.path().join("r.csv");
    std::fs::write(&ragged, "x,y\n1,2\n3\n4,5\n").unwrap();
    assert_eq!(run_json(&["moments"], &ragged).1, 2);

    let inf = dir.path().join("inf.csv");
    std::fs::write(&inf, "x,y\n1,2\ninf,3\n4,5\n").unwrap();
    assert_eq!(run_json(&["moments"], &inf).1, 2);

    let ok = write_csv(&dir, "ok.csv", &gaussian_rows(5, 1));
    assert_eq!(run_json(&["moments", "--k-max", "0"], &ok).1, 2);
    assert_eq!(
        run_json(&["moments", "--x-col", "y", "--y-col", "y"], &ok).1,
        2
    );
    assert_eq!(run_json(&["pvalue", "--method", "induction"], &ok).1, 2);
    assert_eq!(run_json(&["pvalue", "--exact-arith"], &ok).1, 2);
    assert_eq!(
        run_json(
            &["moments", "--method", "monte-carlo", "--samples", "0"],
            &ok
        )
        .1,
        2
    );
    assert_eq!(
        bin().arg("frobnicate").output().unwrap().status.code(),
        Some(2)
    );
}

#[test]
fn column_selection_and_dialect() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.tsv");
    std::fs::write(&path, "id\tb\ta\n0\t1\t3\n\n1\t2\t1\n2\t3\t2\n").unwrap();
    let args = [
        "moments",
        "--delimiter",
        "\\t",
        "--x-col",
        "a",
        "--y-col",
        "b",
        "--k-max",
        "2",
    ];
    let (by_name, code) = run_json(&args, &path);
    assert_eq!(code, 0);
    assert_eq!(by_name["n"], 3);

    let headless = dir.path().join("h.csv");
    std::fs::write(&headless, "9,3,1\n9,1,2\n9,2,3\n").unwrap();
    let (by_index, code) = run_json(
        &[
            "moments",
            "--no-header",
            "--x-col",
            "1",
            "--y-col",
            "2",
            "--k-max",
            "2",
        ],
        &headless,
    );
    assert_eq!(code, 0);
    assert_eq!(values(&by_name), values(&by_index));
}

#[test]
fn validate_defaults_pass() {
    let out = bin().args(["validate", "--trials", "20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema("validate", &report);
    let cells = report["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 6 * 4);
    assert!(cells.iter().all(|c| c["mse"].as_f64().unwrap() <= 1e-24));
}

#[test]
fn validate_tight_bound_fails_but_reports() {
    let out = bin()
        .args([
            "validate",
            "--trials",
            "5",
            "--n-max",
            "5",
            "--tolerance",
            "1e-40",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("exceeds"), "{err}");
}

#[test]
fn validate_is_deterministic() {
    let run = || {
        let out = bin()
            .args([
                "validate", "--trials", "10", "--seed", "42", "--format", "csv",
            ])
            .output()
            .unwrap();
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn compare_small_dataset() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(6, 5));
    let (report, code) = run_json(&["compare", "--samples", "20000"], &path);
    assert_eq!(code, 0, "{report:#}");
    assert_schema("compare", &report);
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row["values"].as_array().unwrap().len(), 4);
    }
    for v in rows[0]["values"].as_array().unwrap() {
        if v.get("std_error").is_none() {
            assert!(v["value"].as_f64().unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn compare_skips_brute_force_when_large() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(30, 9));
    let (report, code) = run_json(&["compare", "--samples", "20000"], &path);
    assert_eq!(code, 0, "{report:#}");
    assert_schema("compare", &report);
    for row in report["rows"].as_array().unwrap() {
        let skipped = row["skipped"].as_array().unwrap();
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0]["method"], "brute-force");
        assert_eq!(row["values"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn compare_flags_tiny_tolerance_disagreement() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(9, 4));
    let (report, code) = run_json(
        &[
            "compare",
            "--samples",
            "1000",
            "--tolerance",
            "0",
            "--k-max",
            "5",
        ],
        &path,
    );
    let any_analytic_gap = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["diffs"].as_array().unwrap().clone())
        .any(|d| d["limit"] == 0.0 && d["abs_diff"].as_f64().unwrap() > 0.0);
    assert_eq!(code, if any_analytic_gap { 1 } else { 0 });
    assert_eq!(report["agree"], !any_analytic_gap);
}

#[test]
fn pvalue_exact_three_points() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
    let (report, code) = run_json(&["pvalue"], &path);
    assert_eq!(code, 0);
    assert_schema("pvalue", &report);
    assert_eq!(report["backend"], "exact");
    assert_eq!(report["count"], 6);
    assert!((report["p"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((report["r_observed"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn pvalue_sampled_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(1000, 2));
    let args = ["pvalue", "--samples", "2000", "--seed", "17"];
    let (a, code) = run_json(&args, &path);
    assert_eq!(code, 0);
    let (b, _) = run_json(&args, &path);
    assert_eq!(a["backend"], "sampled");
    assert_eq!(a["p"], b["p"]);
    assert_eq!(a["extreme"], b["extreme"]);
    let (threaded, _) = run_json(&[&args[..], &["--threads", "3"]].concat(), &path);
    assert_eq!(a["p"], threaded["p"]);
}

#[test]
fn exact_round_trip_through_writer() {
    use perm_moments_cli::input::{read_dataset, write_dataset, CsvOptions};

    let rows = gaussian_rows(9, 21);
    let d = perm_moments::Dataset::from_pairs(&rows).unwrap();
    let mut buf = Vec::new();
    write_dataset(&mut buf, &d, b',', Some(("x", "y"))).unwrap();
    let back = read_dataset(buf.as_slice(), &CsvOptions::default()).unwrap();
    assert_eq!(d.xs(), back.xs());
    assert_eq!(d.ys(), back.ys());

    let dir = TempDir::new().unwrap();
    let original = write_csv(&dir, "a.csv", &rows);
    let written = dir.path().join("b.csv");
    std::fs::write(&written, &buf).unwrap();
    let args = ["moments", "--exact-arith", "--k-max", "4"];
    let (a, code) = run_json(&args, &original);
    assert_eq!(code, 0);
    let (b, _) = run_json(&args, &written);
    assert_eq!(a["moments"], b["moments"]);
    assert_eq!(a["moments"][1]["exact_value"], "1/8");
    assert_schema("moments", &a);
}

#[test]
fn csv_output_shapes() {
    let dir = TempDir::new().unwrap();
    let path = write_csv(&dir, "d.csv", &gaussian_rows(5, 8));
    for (cmd, header) in [
        ("moments", "k,value,method,std_error,exact_value"),
        ("pvalue", "n,r_observed,p,backend,count,extreme"),
        ("compare", "k,induction,closed_form,brute_force,monte_carlo"),
    ] {
        let out = bin()
            .args([cmd, "--format", "csv", "--samples", "100", "--input"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.code().unwrap() <= 1, "{cmd}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with(header), "{cmd}: {text}");
    }
}

#[test]
fn reads_stdin_when_no_input() {
    let out = bin()
        .args(["moments", "--k-max", "2", "--format", "csv"])
        .write_stdin("x,y\n1,1\n2,2\n3,3\n")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n2,0.5,"), "{text}");
}
