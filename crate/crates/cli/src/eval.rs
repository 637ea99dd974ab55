//! `eval`: one operation on a JSON input, validated against its schema.

use crate::schema::{object, reference, validate};
use crate::CliError;
use ri_ergodic::ergodic::{cesaro, maximal_truncated};
use ri_ergodic::rearrange::rearrangement;
use ri_ergodic::spaces::{norm_eval, xi_seminorm, XiWeight};
use ri_ergodic::symbols::{apply, check_condition_i};
use ri_ergodic::{MeasFn, NormSpec, Symbol};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

/// Horizon of `analyze-symbol` when the input omits one.
pub const DEFAULT_HORIZON: u32 = 10;
pub const MAX_HORIZON: u32 = 1000;
/// Upper limit on `n` and `k` accepted from JSON.
pub const MAX_STEPS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Rearrange,
    Norm,
    Xi,
    Apply,
    Cesaro,
    Maximal,
    AnalyzeSymbol,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Rearrange,
        Command::Norm,
        Command::Xi,
        Command::Apply,
        Command::Cesaro,
        Command::Maximal,
        Command::AnalyzeSymbol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Rearrange => "rearrange",
            Command::Norm => "norm",
            Command::Xi => "xi",
            Command::Apply => "apply",
            Command::Cesaro => "cesaro",
            Command::Maximal => "maximal",
            Command::AnalyzeSymbol => "analyze-symbol",
        }
    }

    /// The input schema of the command.
    pub fn schema(self) -> Value {
        let steps = json!({ "type": "integer", "minimum": 1, "maximum": MAX_STEPS });
        let f = ("f", reference("meas_fn"));
        let symbol = ("symbol", reference("symbol"));
        match self {
            Command::Rearrange => object(&[f], &[]),
            Command::Norm => object(&[("spec", reference("norm_spec")), f], &[]),
            Command::Xi => object(&[("weight", reference("xi_weight")), f], &[]),
            Command::Apply => object(&[symbol, f], &[]),
            Command::Cesaro => object(&[symbol, f, ("n", steps)], &[]),
            Command::Maximal => object(&[symbol, f, ("k", steps)], &[]),
            Command::AnalyzeSymbol => object(
                &[symbol, ("horizon", json!({ "type": "integer", "minimum": 1, "maximum": MAX_HORIZON }))],
                &["horizon"],
            ),
        }
    }
}

fn field<T: DeserializeOwned>(input: &Value, name: &str) -> Result<T, CliError> {
    Ok(serde_json::from_value(input[name].clone())?)
}

fn value(v: f64) -> Value {
    json!({ "value": ri_ergodic::json::ExtReal(v) })
}

/// Validates `input` and runs the command.
///
/// Function-valued results are returned as the function's own JSON;
/// scalars as `{"value": ...}`; `analyze-symbol` returns the full analysis.
pub fn eval(cmd: Command, input: &Value) -> Result<Value, CliError> {
    validate(&cmd.schema(), input)?;
    let out = match cmd {
        Command::Rearrange => {
            let f: MeasFn = field(input, "f")?;
            serde_json::to_value(rearrangement(&f))?
        }
        Command::Norm => {
            let spec: NormSpec = field(input, "spec")?;
            let f: MeasFn = field(input, "f")?;
            value(norm_eval(&spec, &f)?)
        }
        Command::Xi => {
            let w: XiWeight = field(input, "weight")?;
            let f: MeasFn = field(input, "f")?;
            value(xi_seminorm(&w, &f)?)
        }
        Command::Apply => {
            let phi: Symbol = field(input, "symbol")?;
            let f: MeasFn = field(input, "f")?;
            serde_json::to_value(apply(&phi, &f)?)?
        }
        Command::Cesaro => {
            let phi: Symbol = field(input, "symbol")?;
            let f: MeasFn = field(input, "f")?;
            serde_json::to_value(cesaro(&phi, &f, field(input, "n")?)?)?
        }
        Command::Maximal => {
            let phi: Symbol = field(input, "symbol")?;
            let f: MeasFn = field(input, "f")?;
            serde_json::to_value(maximal_truncated(&phi, &f, field(input, "k")?)?)?
        }
        Command::AnalyzeSymbol => {
            let phi: Symbol = field(input, "symbol")?;
            let horizon = match input.get("horizon") {
                Some(h) => serde_json::from_value(h.clone())?,
                None => DEFAULT_HORIZON,
            };
            serde_json::to_value(check_condition_i(&phi, horizon)?)?
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Value {
        json!({ "kind": "lebesgue_half_line" })
    }

    #[test]
    fn every_command_schema_compiles() {
        for c in Command::ALL {
            jsonschema::validator_for(&c.schema()).unwrap();
        }
    }

    #[test]
    fn rearranges_an_indicator() {
        let f = json!({ "space": half(), "breakpoints": [2.0, 5.0], "values": [1.0], "left_tail": 0.0, "right_tail": 0.0 });
        let out = eval(Command::Rearrange, &json!({ "f": f })).unwrap();
        let got: MeasFn = serde_json::from_value(out).unwrap();
        let want: MeasFn = serde_json::from_value(
            json!({ "space": half(), "breakpoints": [3.0], "values": [], "left_tail": 1.0, "right_tail": 0.0 }),
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn lorentz_norm_of_an_indicator() {
        // ∫₀⁴ t^{1/2} dt/t = 2·4^{1/2}
        let f = json!({ "space": half(), "breakpoints": [4.0], "values": [], "left_tail": 1.0, "right_tail": 0.0 });
        let spec = json!({ "kind": "lorentz", "p": 2.0, "q": 1.0, "space": half() });
        assert_eq!(eval(Command::Norm, &json!({ "spec": spec, "f": f })).unwrap(), json!({ "value": 4.0 }));
    }

    #[test]
    fn power_map_is_not_measure_bounded() {
        let sym = json!({
            "kind": "interval",
            "space": { "kind": "lebesgue_interval", "length": 1.0 },
            "branches": [{ "domain": [0.0, 1.0], "form": { "power": 2 } }]
        });
        let out = eval(Command::AnalyzeSymbol, &json!({ "symbol": sym, "horizon": 3 })).unwrap();
        assert_eq!(out["measure_bound"], json!("inf"));
    }

    #[test]
    fn schema_and_semantic_errors() {
        let err = eval(Command::Norm, &json!({ "f": {} })).unwrap_err();
        assert!(matches!(&err, CliError::Schema(e) if !e.is_empty()), "{err:?}");
        // passes the schema, fails the constructor: breakpoints out of order
        let f = json!({ "space": half(), "breakpoints": [5.0, 2.0], "values": [1.0] });
        let err = eval(Command::Rearrange, &json!({ "f": f })).unwrap_err();
        assert!(matches!(err, CliError::Json(_) | CliError::Input(_)), "{err:?}");
        assert_eq!(err.exit_code(), crate::ExitCode::Usage);
    }
}
