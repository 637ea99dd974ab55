//! Replays the checked-in fuzz seeds and runs structural mutations of them
//! through the fuzz entry points on the stable toolchain.

use proptest::prelude::*;
use ri_ergodic_cli::fuzzing;
use serde_json::{json, Value};
use std::path::PathBuf;

type Target = fn(&[u8]);

const TARGETS: [(&str, Target); 5] = [
    ("meas_fn_json", fuzzing::meas_fn_json),
    ("symbol_json", fuzzing::symbol_json),
    ("norm_spec_json", fuzzing::norm_spec_json),
    ("eval_input", fuzzing::eval_input),
    ("schedule", fuzzing::schedule),
];

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed_"))
        .collect();
    paths.sort();
    paths.iter().map(|p| std::fs::read(p).unwrap()).collect()
}

#[test]
fn seeds_replay_and_are_accepted() {
    use ri_ergodic::{MeasFn, NormSpec, Symbol};
    for (name, target) in TARGETS {
        let corpus = seeds(name);
        assert!(corpus.len() >= 3, "{name} has too few seeds");
        for data in &corpus {
            target(data);
            let ok = match name {
                "meas_fn_json" => serde_json::from_slice::<MeasFn>(data).is_ok(),
                "symbol_json" => serde_json::from_slice::<Symbol>(data).is_ok(),
                "norm_spec_json" => serde_json::from_slice::<NormSpec>(data).is_ok(),
                "eval_input" => {
                    let cmd = ri_ergodic_cli::Command::ALL[data[0] as usize % 7];
                    ri_ergodic_cli::eval(cmd, &serde_json::from_slice(&data[1..]).unwrap()).is_ok()
                }
                _ => ri_ergodic_cli::parse_schedule(std::str::from_utf8(data).unwrap()).is_ok(),
            };
            assert!(ok, "{name} seed rejected: {}", String::from_utf8_lossy(data));
        }
    }
}

fn replacements() -> Vec<Value> {
    vec![
        json!(0),
        json!(-1),
        json!(0.5),
        json!(2),
        json!(-0.0),
        json!(1e308),
        json!(-1e308),
        json!(5e-324),
        json!(1e20),
        json!(9007199254740993u64),
        json!(-9223372036854775808i64),
        json!("inf"),
        json!("-inf"),
        json!("exp_recip"),
        json!("log_clip"),
        json!(null),
        json!([]),
        json!([1.0, 0.5]),
        json!({}),
        json!({ "kind": "atomic_z" }),
        json!({ "kind": "lebesgue_interval", "length": 1e-300 }),
        json!({ "power": 1 }),
    ]
}

fn count_nodes(v: &Value) -> usize {
    1 + match v {
        Value::Array(a) => a.iter().map(count_nodes).sum(),
        Value::Object(o) => o.values().map(count_nodes).sum(),
        _ => 0,
    }
}

/// Replaces the `idx`-th node in preorder.
fn replace(v: &mut Value, idx: &mut usize, with: &Value) -> bool {
    if *idx == 0 {
        *v = with.clone();
        return true;
    }
    *idx -= 1;
    match v {
        Value::Array(a) => a.iter_mut().any(|c| replace(c, idx, with)),
        Value::Object(o) => o.values_mut().any(|c| replace(c, idx, with)),
        _ => false,
    }
}

/// Drops the `idx`-th array element or object entry found in preorder.
fn remove(v: &mut Value, idx: &mut usize) -> bool {
    match v {
        Value::Array(a) if !a.is_empty() => {
            if *idx < a.len() {
                a.remove(*idx);
                return true;
            }
            *idx -= a.len();
            a.iter_mut().any(|c| remove(c, idx))
        }
        Value::Object(o) if !o.is_empty() => {
            if *idx < o.len() {
                let key = o.keys().nth(*idx).unwrap().clone();
                o.remove(&key);
                return true;
            }
            *idx -= o.len();
            o.values_mut().any(|c| remove(c, idx))
        }
        _ => false,
    }
}

fn mutate(seed: &[u8], edits: &[(usize, usize, bool)], json_offset: usize) -> Vec<u8> {
    let Ok(mut v) = serde_json::from_slice::<Value>(&seed[json_offset..]) else { return seed.to_vec() };
    let reps = replacements();
    for &(node, rep, drop) in edits {
        let mut i = node % count_nodes(&v);
        if drop {
            remove(&mut v, &mut i);
        } else {
            replace(&mut v, &mut i, &reps[rep % reps.len()]);
        }
    }
    let mut out = seed[..json_offset].to_vec();
    out.extend(serde_json::to_vec(&v).unwrap());
    out
}

fn edits() -> impl Strategy<Value = Vec<(usize, usize, bool)>> {
    prop::collection::vec((any::<usize>(), any::<usize>(), prop::bool::weighted(0.2)), 1..4)
}

fn mutation_run(name: &str, target: Target, json_offset: usize) {
    let corpus = seeds(name);
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases: 4000,
        failure_persistence: None,
        rng_seed: proptest::test_runner::RngSeed::Fixed(42),
        ..ProptestConfig::default()
    });
    runner
        .run(&(0..corpus.len(), edits()), |(i, e)| {
            target(&mutate(&corpus[i], &e, json_offset));
            Ok(())
        })
        .unwrap_or_else(|e| panic!("{name}: {e}"));
}

#[test]
fn mutated_meas_fn_json() {
    mutation_run("meas_fn_json", fuzzing::meas_fn_json, 0);
}

#[test]
fn mutated_symbol_json() {
    mutation_run("symbol_json", fuzzing::symbol_json, 0);
}

#[test]
fn mutated_norm_spec_json() {
    mutation_run("norm_spec_json", fuzzing::norm_spec_json, 0);
}

#[test]
fn mutated_eval_input() {
    mutation_run("eval_input", fuzzing::eval_input, 1);
}

proptest! {
    #[test]
    fn arbitrary_bytes_never_panic(data in prop::collection::vec(any::<u8>(), 0..64)) {
        for (_, target) in TARGETS {
            target(&data);
        }
    }

    #[test]
    fn schedule_strings(s in "(dyadic:[0-9]{1,3}|[0-9]{1,4}(,[0-9]{1,4}){0,5})") {
        fuzzing::schedule(s.as_bytes());
    }
}
