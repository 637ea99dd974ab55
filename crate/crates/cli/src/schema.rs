//! The JSON schemas shipped under `schemas/`.
//!
//! Type schemas refer to each other through `#/$defs/<name>`; [`bundle`]
//! places every type under `$defs` of one root so those references resolve.

use crate::CliError;
use serde_json::{json, Map, Value};

/// `(name, source)` for every type schema.
pub const TYPES: &[(&str, &str)] = &[
    ("ext_real", include_str!("../schemas/ext_real.schema.json")),
    ("space", include_str!("../schemas/space.schema.json")),
    ("phi", include_str!("../schemas/phi.schema.json")),
    ("meas_fn", include_str!("../schemas/meas_fn.schema.json")),
    ("xi_weight", include_str!("../schemas/xi_weight.schema.json")),
    ("norm_spec", include_str!("../schemas/norm_spec.schema.json")),
    ("symbol", include_str!("../schemas/symbol.schema.json")),
];

fn defs() -> Map<String, Value> {
    TYPES
        .iter()
        .map(|(name, src)| {
            let mut v: Value = serde_json::from_str(src).expect("shipped schemas are valid JSON");
            v.as_object_mut().expect("schemas are objects").remove("$schema");
            (name.to_string(), v)
        })
        .collect()
}

/// A self-contained schema whose root is `body`.
pub fn bundle(body: Value) -> Value {
    let mut root = Map::new();
    root.insert("$schema".into(), json!("https://json-schema.org/draft/2020-12/schema"));
    root.insert("$defs".into(), Value::Object(defs()));
    if let Value::Object(body) = body {
        root.extend(body);
    }
    Value::Object(root)
}

/// The self-contained schema of one type, e.g. `meas_fn`.
pub fn type_schema(name: &str) -> Option<Value> {
    TYPES.iter().any(|(n, _)| *n == name).then(|| bundle(json!({ "$ref": format!("#/$defs/{name}") })))
}

/// An object schema with the given `(field, schema)` properties, all
/// required except those listed in `optional`.
pub fn object(fields: &[(&str, Value)], optional: &[&str]) -> Value {
    let props: Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    let required: Vec<&str> = fields.iter().map(|(k, _)| *k).filter(|k| !optional.contains(k)).collect();
    bundle(json!({
        "type": "object",
        "properties": props,
        "required": required,
        "additionalProperties": false
    }))
}

pub fn reference(name: &str) -> Value {
    json!({ "$ref": format!("#/$defs/{name}") })
}

/// Checks `instance` against `schema`, listing every violation.
pub fn validate(schema: &Value, instance: &Value) -> Result<(), CliError> {
    let validator =
        jsonschema::validator_for(schema).map_err(|e| CliError::Internal(format!("schema does not compile: {e}")))?;
    let errors: Vec<String> =
        validator.iter_errors(instance).map(|e| format!("{}: {}", e.instance_path(), e)).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::Schema(errors))
    }
}
