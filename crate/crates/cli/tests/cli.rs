use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn finvic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finvic")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn built_ring(dir: &TempDir, name: &str) -> PathBuf {
    let p = dir.path().join(format!("{name}.json"));
    let out = finvic(&["ring", "build", "--builtin", name, "--ring-out", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    p
}

#[test]
fn describe_z4() {
    let dir = TempDir::new().unwrap();
    let z4 = built_ring(&dir, "Z4");
    let out = finvic(&["ring", "describe", "--in", s(&z4)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verb"], "ring.describe");
    assert_eq!(r["result"]["radical"], json!([0, 2]));
    assert_eq!(r["result"]["q"], 1);
    assert_eq!(r["result"]["mu"], json!([1]));
    assert_eq!(r["result"]["field_orders"], json!([2]));
    assert_eq!(r["verified"]["aw_embedding"], true);
}

#[test]
fn built_rings_roundtrip_through_files() {
    let dir = TempDir::new().unwrap();
    for name in ["F2", "F3", "Z4", "Z8", "F2C2", "T2F2", "M2F2", "F2S3"] {
        let path = built_ring(&dir, name);
        let out = finvic(&["ring", "wedderburn", "--in", s(&path)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(report(&out)["verified"]["aw_embedding"], true, "{name}");
        let build = report(&finvic(&["ring", "build", "--builtin", name]));
        assert_eq!(build["verified"]["roundtrip"], true);
    }
}

#[test]
fn check_ordered_morphism() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &json!({"ring": "F2", "d": 1, "n": 2, "f_prime": [[1], [0]], "f_dprime": [[1, 0]]}));
    let out = finvic(&["morphism", "check", "--ring", "builtin:F2", "--in", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["column_adapted"], true);
    assert_eq!(r["result"]["S"], json!([[1]]));
}

#[test]
fn factor_a_swap() {
    let dir = TempDir::new().unwrap();
    let m = write(
        &dir,
        "m.json",
        &json!({"ring": "F2", "d": 2, "n": 3,
        "f_prime": [[0, 1], [1, 0], [0, 0]], "f_dprime": [[0, 1, 0], [1, 0, 0]]}),
    );
    let out = finvic(&["morphism", "factor", "--ring", "builtin:F2", "--in", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["verified"].as_object().unwrap().values().all(|v| v == true), "{r}");
    assert_eq!(r["result"]["f2"]["f_dprime"], json!([[1, 0, 0], [0, 1, 0]]));
}

#[test]
fn compare_by_rank() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &json!({"ring": "F2", "d": 1, "n": 1, "f_prime": [[1]], "f_dprime": [[1]]}));
    let b = write(&dir, "b.json", &json!({"ring": "F2", "d": 1, "n": 2, "f_prime": [[1], [0]], "f_dprime": [[1, 0]]}));
    let out = finvic(&["order", "compare", "--ring", "builtin:F2", "--a", s(&a), "--b", s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["order"], "LT");
    // the only column of the identity is a pivot, so nothing can be inserted
    assert_eq!(r["result"]["insertion_chain"], Value::Null);
    let back = report(&finvic(&["order", "compare", "--ring", "builtin:F2", "--a", s(&b), "--b", s(&a)]));
    assert_eq!(back["result"]["order"], "GT");
}

#[test]
fn compare_reports_insertion_chain() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &json!({"ring": "F2", "d": 1, "n": 2, "f_prime": [[1], [0]], "f_dprime": [[1, 0]]}));
    let g = write(
        &dir,
        "g.json",
        &json!({"ring": "F2", "d": 1, "n": 3, "f_prime": [[1], [0], [0]], "f_dprime": [[1, 0, 0]]}),
    );
    let r = report(&finvic(&["order", "compare", "--ring", "builtin:F2", "--a", s(&f), "--b", s(&g)]));
    assert_eq!(r["result"]["order"], "LT");
    assert_eq!(r["result"]["insertion_chain"], json!([[2, 2]]));
    assert_eq!(r["verified"]["insertion_refines_total"], true);
    let r = report(&finvic(&["order", "compare", "--ring", "builtin:F2", "--a", s(&f), "--b", s(&f)]));
    assert_eq!(r["result"]["order"], "EQ");
    assert_eq!(r["result"]["insertion_chain"], json!([]));
}

#[test]
fn iota_masks_dependent_rows() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &json!({"ring": "F2", "d": 1, "n": 2, "f_prime": [[1], [1]], "f_dprime": [[1, 0]]}));
    let out = finvic(&["order", "iota", "--ring", "builtin:F2", "--in", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let word = &report(&out)["result"]["word"];
    assert_eq!(word.as_array().unwrap().len(), 2);
    assert_eq!(word[0]["m1"], json!([["club"]]));
    assert_eq!(word[1]["m1"], json!([[1]]));
}

#[test]
fn enumeration_is_deterministic() {
    let run = || {
        let out = finvic(&["enumerate", "ovic", "--ring", "builtin:Z4", "--d", "1", "--n", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let mut r = report(&out);
        r.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&r).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    let r: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(r["result"]["count"], "24");
    let vic = report(&finvic(&["enumerate", "vic", "--ring", "builtin:Z4", "--d", "1", "--n", "2", "--count-only"]));
    assert_eq!(vic["result"]["count"], "48");
}

#[test]
fn budget_is_a_domain_error() {
    let out = finvic(&["enumerate", "ovic", "--ring", "builtin:F2", "--d", "1", "--n", "3", "--budget", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "BudgetExceeded");
}

#[test]
fn span_of_the_identity() {
    let dir = TempDir::new().unwrap();
    let gens = write(
        &dir,
        "g.json",
        &json!([{"degree": 1, "terms": [
            {"morphism": {"ring": "F2", "d": 1, "n": 1, "f_prime": [[1]], "f_dprime": [[1]]}, "coeff": 1}
        ]}]),
    );
    let out = finvic(&[
        "noether",
        "span",
        "--ring",
        "builtin:F2",
        "--d",
        "1",
        "--k",
        "F2",
        "--gens",
        s(&gens),
        "--horizon",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["dims"], json!([0, 1, 6, 28]));
    assert_eq!(r["result"]["ambient_dims"], json!([0, 1, 6, 28]));
    assert_eq!(r["verified"]["generators_are_members"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(finvic(&["ring", "frobnicate"]).status.code(), Some(2));
    assert_eq!(finvic(&["ring", "describe", "--in", "x", "--bogus"]).status.code(), Some(2));
    assert_eq!(finvic(&["selftest", "slow"]).status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let bad =
        write(&dir, "m.json", &json!({"ring": "F2", "d": 1, "n": 2, "f_prime": [[0], [0]], "f_dprime": [[1, 0]]}));
    let out = finvic(&["morphism", "check", "--ring", "builtin:F2", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "InvalidInput");
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidInput"));

    let unordered = write(
        &dir,
        "u.json",
        &json!({"ring": "F2", "d": 2, "n": 2, "f_prime": [[0, 1], [1, 0]], "f_dprime": [[0, 1], [1, 0]]}),
    );
    let out = finvic(&["order", "iota", "--ring", "builtin:F2", "--in", s(&unordered)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "NotColumnAdapted");

    let out = finvic(&["ring", "describe", "--in", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_quick_passes() {
    let out = finvic(&["selftest", "quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["result"]["passed"], true);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("criterion ")).count(), 9);
}

#[test]
fn selftest_reports_corrupted_ring() {
    let dir = TempDir::new().unwrap();
    let z4 = built_ring(&dir, "Z4");
    let mut ring: Value = serde_json::from_slice(&std::fs::read(&z4).unwrap()).unwrap();
    ring["mul"][2][3] = json!(1);
    let bad = write(&dir, "bad.json", &ring);
    let out = finvic(&["selftest", "quick", "--extra-ring", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["passed"], false);
    assert_eq!(r["verified"]["criterion 1"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidTables"));
    assert_eq!(r["verified"]["criterion 4"], true);
}

#[test]
fn selftest_is_reproducible() {
    let run = || {
        let mut r = report(&finvic(&["selftest", "quick", "--seed", "7"]));
        r.as_object_mut().unwrap().remove("wall_time_ms");
        r
    };
    assert_eq!(run(), run());
}

#[test]
fn report_to_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.json");
    let out = finvic(&["--out", s(&path), "ring", "describe", "--in", "builtin:F2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["radical"], json!([0]));
}
