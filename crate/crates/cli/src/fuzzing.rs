//! Entry points shared by the `fuzz/` targets and the corpus replay tests.
//! Each accepts arbitrary bytes; errors are fine, panics are bugs.

use crate::{eval, parse_schedule, Command};
use ri_ergodic::rearrange::{equimeasurable, rearrangement};
use ri_ergodic::spaces::{fundamental_function, norm_eval};
use ri_ergodic::symbols::{apply, measure_bound, preimage};
use ri_ergodic::{indicator, MeasFn, MeasSet, NormSpec, Symbol};
use serde_json::Value;

/// Inputs above this size are skipped.
pub const MAX_INPUT: usize = 1 << 16;
/// Bounds on iteration counts inside fuzzed `eval` inputs.
pub const MAX_FUZZ_STEPS: u64 = 256;
pub const MAX_FUZZ_HORIZON: u64 = 16;

fn round_trip<T>(v: &T) -> T
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    let s = serde_json::to_string(v).expect("parsed values serialize");
    serde_json::from_str(&s).expect("serialized values parse back")
}

pub fn meas_fn_json(data: &[u8]) {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(f) = serde_json::from_slice::<MeasFn>(data) else { return };
    assert_eq!(round_trip(&f), f);
    let r = rearrangement(&f);
    assert!(equimeasurable(&f, &r.to_measfn()) || f.space().is_atomic());
    assert!(r.values().windows(2).all(|w| w[1] <= w[0]));
    if let Ok(spec) = NormSpec::lp(1.0, *f.space()) {
        let _ = norm_eval(&spec, &f);
    }
}

pub fn symbol_json(data: &[u8]) {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(phi) = serde_json::from_slice::<Symbol>(data) else { return };
    assert_eq!(round_trip(&phi), phi);
    let a = measure_bound(&phi);
    assert!(a >= 0.0, "measure bound {a}");
    let space = *phi.space();
    let set = if space.is_atomic() { MeasSet::atoms([0, 1, 2]) } else { MeasSet::interval(0.25, 0.5) };
    if let Ok(e) = preimage(&phi, &set) {
        assert!(e.validate(&space).is_ok());
    }
    if let Ok(f) = indicator(&space, &set) {
        if let Ok(g) = apply(&phi, &f) {
            assert_eq!(g.space(), &space);
        }
    }
}

pub fn norm_spec_json(data: &[u8]) {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(spec) = serde_json::from_slice::<NormSpec>(data) else { return };
    assert_eq!(round_trip(&spec), spec);
    for t in [0.0, 0.5, 1.0, 3.0] {
        if let Ok(v) = fundamental_function(&spec, t) {
            assert!(!v.is_nan() && v >= 0.0, "φ_X({t}) = {v}");
        }
    }
}

fn steps_within_bounds(v: &Value) -> bool {
    let small = |key: &str, max: u64| v.get(key).and_then(Value::as_u64).is_none_or(|n| n <= max);
    small("n", MAX_FUZZ_STEPS) && small("k", MAX_FUZZ_STEPS) && small("horizon", MAX_FUZZ_HORIZON)
}

/// The first byte selects the command, the rest is its JSON input.
pub fn eval_input(data: &[u8]) {
    let Some((&sel, rest)) = data.split_first() else { return };
    if rest.len() > MAX_INPUT {
        return;
    }
    let Ok(input) = serde_json::from_slice::<Value>(rest) else { return };
    if !steps_within_bounds(&input) {
        return;
    }
    let cmd = Command::ALL[sel as usize % Command::ALL.len()];
    if let Ok(out) = eval(cmd, &input) {
        serde_json::to_string(&out).expect("results serialize");
    }
}

pub fn schedule(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_schedule(s) {
        assert!(!v.is_empty() && v[0] > 0 && v.windows(2).all(|w| w[0] < w[1]));
    }
}
