use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn riergo(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_riergo"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn eval(cmd: &str, input: Value) -> (i32, Value, String) {
    let out = riergo(&["eval", cmd], Some(&input.to_string()));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = if stdout.is_empty() { Value::Null } else { serde_json::from_str(&stdout).unwrap() };
    (out.status.code().unwrap(), value, String::from_utf8(out.stderr).unwrap())
}

fn half() -> Value {
    json!({ "kind": "lebesgue_half_line" })
}

fn chi(lo: f64, hi: f64) -> Value {
    json!({ "space": half(), "breakpoints": [lo, hi], "values": [1.0], "left_tail": 0.0, "right_tail": 0.0 })
}

#[test]
fn eval_rearrange_indicator() {
    let (code, out, _) = eval("rearrange", json!({ "f": chi(2.0, 5.0) }));
    assert_eq!(code, 0);
    let want = json!({ "space": half(), "breakpoints": [3.0], "values": [], "left_tail": 1.0, "right_tail": 0.0 });
    assert_eq!(out, want);
}

#[test]
fn eval_analyze_power_maps() {
    for n in [2, 3] {
        let sym = json!({
            "kind": "interval",
            "space": { "kind": "lebesgue_interval", "length": 1.0 },
            "branches": [{ "domain": [0.0, 1.0], "form": { "power": n } }]
        });
        let (code, out, _) = eval("analyze-symbol", json!({ "symbol": sym }));
        assert_eq!(code, 0);
        assert_eq!(out["measure_bound"], json!("inf"));
    }
}

#[test]
fn eval_lorentz_norm() {
    let f = json!({ "space": half(), "breakpoints": [4.0], "values": [], "left_tail": 1.0, "right_tail": 0.0 });
    let spec = json!({ "kind": "lorentz", "p": 2, "q": 1, "space": half() });
    let (code, out, _) = eval("norm", json!({ "spec": spec, "f": f }));
    assert_eq!(code, 0);
    assert_eq!(out, json!({ "value": 4.0 }));
}

#[test]
fn eval_cesaro_and_maximal() {
    let sym = json!({
        "kind": "interval",
        "space": { "kind": "lebesgue_line" },
        "branches": [{ "domain": ["-inf", "inf"], "form": { "affine": { "slope": 1.0, "offset": -1.0 } } }]
    });
    let f = json!({ "space": { "kind": "lebesgue_line" }, "breakpoints": [0.0, 1.0], "values": [1.0] });
    let (code, out, _) = eval("cesaro", json!({ "symbol": sym, "f": f, "n": 4 }));
    assert_eq!(code, 0);
    assert_eq!(out["breakpoints"], json!([0.0, 4.0]));
    assert_eq!(out["values"], json!([0.25]));
    let (code, out, _) = eval("maximal", json!({ "symbol": sym, "f": f, "k": 4 }));
    assert_eq!(code, 0);
    // T#_4 χ_[0,1) = 1/(⌊x⌋+1) on [0, 4)
    assert_eq!(out["values"], json!([1.0, 0.5, 1.0 / 3.0, 0.25]));
}

#[test]
fn eval_xi_and_apply() {
    let w = json!({ "space": half(), "breakpoints": [2.0], "values": [], "left_tail": 3.0, "right_tail": 1.0 });
    // ∫ w f* for f* = χ_[0,3): 3·2 + 1·1
    let (code, out, _) = eval("xi", json!({ "weight": w, "f": chi(2.0, 5.0) }));
    assert_eq!(code, 0);
    assert_eq!(out, json!({ "value": 7.0 }));
    let shift = json!({ "kind": "atomic", "space": { "kind": "atomic_z" }, "shift": 1 });
    let f = json!({ "space": { "kind": "atomic_z" }, "entries": [[4, 2.5]] });
    let (code, out, _) = eval("apply", json!({ "symbol": shift, "f": f }));
    assert_eq!(code, 0);
    assert_eq!(out["entries"], json!([[3, 2.5]]));
}

#[test]
fn schema_violation_exits_2_with_error_object() {
    let (code, out, err) = eval("norm", json!({ "f": chi(0.0, 1.0), "spec": { "kind": "lp" } }));
    assert_eq!(code, 2);
    assert_eq!(out, Value::Null);
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"]["kind"], json!("schema"));
    assert!(!e["error"]["details"].as_array().unwrap().is_empty());
}

#[test]
fn semantic_and_parse_errors_exit_2() {
    let bad = json!({ "f": { "space": half(), "breakpoints": [5.0, 2.0], "values": [1.0] } });
    let (code, _, err) = eval("rearrange", bad);
    assert_eq!(code, 2);
    assert!(serde_json::from_str::<Value>(err.trim()).unwrap()["error"].is_object());
    let out = riergo(&["eval", "rearrange"], Some("{not json"));
    assert_eq!(out.status.code(), Some(2));
    let out = riergo(&["eval", "rearrange", "--input", "/nonexistent/input.json"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = riergo(&["run-example", "no-such-example"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = riergo(&["run-example", "shift-n", "--schedule", "4,2"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_reads_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    std::fs::write(&input, json!({ "f": chi(2.0, 5.0) }).to_string()).unwrap();
    let out = dir.path().join("out.json");
    let o = riergo(&["eval", "rearrange", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["breakpoints"], json!([3.0]));
}

#[test]
fn schema_command_prints_bundled_schemas() {
    for name in ["meas_fn", "symbol", "norm_spec", "xi_weight", "analyze-symbol"] {
        let o = riergo(&["schema", name], None);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["$defs"]["space"].is_object());
    }
    assert_eq!(riergo(&["schema", "nope"], None).status.code(), Some(2));
}

fn run_example(id: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run-example", id, "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    riergo(&args, None)
}

const IDS: [&str; 8] = [
    "counterex-sv",
    "counterex-sv-power",
    "counterex-l1",
    "counterex-linfty",
    "shift-n",
    "shift-z",
    "nonsurjective-shift",
    "permutation-demo",
];

#[test]
fn every_example_passes_and_is_byte_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for id in IDS {
        for dir in [a.path(), b.path()] {
            let o = run_example(id, dir, &[]);
            assert_eq!(o.status.code(), Some(0), "{id}: {}", String::from_utf8_lossy(&o.stderr));
        }
        for ext in ["csv", "json"] {
            let name = format!("{id}.{ext}");
            let (x, y) = (std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap());
            assert_eq!(x, y, "{name} differs between runs");
        }
        let v: Value = serde_json::from_slice(&std::fs::read(a.path().join(format!("{id}.json"))).unwrap()).unwrap();
        assert_eq!(v["verdict"], json!("pass"), "{id}");
    }
}

#[test]
fn format_flag_selects_one_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_example("counterex-l1", dir.path(), &["--format", "csv", "--schedule", "1,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("counterex-l1.csv").exists());
    assert!(!dir.path().join("counterex-l1.json").exists());
    let csv = std::fs::read_to_string(dir.path().join("counterex-l1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

/// Splits one CSV line; fields may be double-quoted.
fn cells(line: &str) -> Vec<String> {
    let (mut out, mut cur, mut quoted) = (Vec::new(), String::new(), false);
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn csv_column(csv: &str, name: &str) -> Vec<(u64, String)> {
    let mut lines = csv.lines();
    let header = cells(lines.next().unwrap());
    let idx = header.iter().position(|h| h == name).unwrap();
    lines
        .map(|l| {
            let row = cells(l);
            (row[0].parse().unwrap(), row[idx].clone())
        })
        .collect()
}

#[test]
fn verdicts_follow_from_the_emitted_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_example("counterex-l1", dir.path(), &[]).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("counterex-l1.csv")).unwrap();
    for (n, v) in csv_column(&csv, "L2") {
        let l2: f64 = v.parse().unwrap();
        assert!((l2 - (n as f64).powf(-0.5)).abs() <= 1e-12);
    }
    assert!(csv_column(&csv, "xi[1]").iter().all(|(_, v)| v == "1"));
    let rows: Vec<u64> = csv_column(&csv, "L2").iter().map(|r| r.0).collect();
    assert_eq!(rows, vec![1, 10, 100, 1000]);

    assert_eq!(run_example("shift-n", dir.path(), &[]).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("shift-n.csv")).unwrap();
    for (n, v) in csv_column(&csv, "dist[L1]") {
        if n >= 6 {
            let d: f64 = v.parse().unwrap();
            assert!((d - 21.0 / n as f64).abs() <= 1e-12 * d);
        }
    }

    assert_eq!(run_example("nonsurjective-shift", dir.path(), &["--horizon", "7"]).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("nonsurjective-shift.csv")).unwrap();
    let a: Vec<(u64, String)> = csv_column(&csv, "A_k");
    assert_eq!(a.len(), 7);
    assert!(a.iter().all(|(k, v)| *v == (k + 1).to_string()));
}

#[test]
fn verify_writes_summary_and_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = riergo(&["verify", "--seed", "3", "--trials", "1", "--out", out], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s: Value = serde_json::from_slice(&std::fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["failures"], json!(0));
    assert!(s["properties"].as_array().unwrap().iter().all(|p| p["cases"] == json!(1)));
    assert!(!dir.path().join("counterexamples").exists());

    let o = riergo(&["verify", "--seed", "3", "--trials", "50", "--out", out, "--inject-violation"], None);
    assert_eq!(o.status.code(), Some(1));
    let c: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("counterexamples/harness_self_test.json")).unwrap())
            .unwrap();
    assert_eq!(c["property"], json!("harness_self_test"));
    assert!(c["instance"].is_object());
    assert_eq!(riergo(&["verify", "--trials", "0", "--out", out], None).status.code(), Some(2));
}
