use crate::output::{json_bytes, write_atomic};
use crate::CliError;
use ri_ergodic::suites::{verify_suite, SuiteSummary};
use serde_json::json;
use std::path::Path;

/// Runs every property suite and writes `summary.json` plus one
/// `counterexamples/<property>.json` per failing property.
pub fn run_verify(seed: u64, trials: u32, inject_violation: bool, out: &Path) -> Result<SuiteSummary, CliError> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    let summary = verify_suite(seed, trials, inject_violation);
    let value = serde_json::to_value(&summary)?;
    write_atomic(&out.join("summary.json"), &json_bytes(&value))?;
    for p in &summary.properties {
        if let Some(failure) = &p.failure {
            let doc = json!({ "property": p.name, "seed": seed, "reason": failure.reason, "instance": failure.instance });
            write_atomic(&out.join("counterexamples").join(format!("{}.json", p.name)), &json_bytes(&doc))?;
        }
    }
    Ok(summary)
}
