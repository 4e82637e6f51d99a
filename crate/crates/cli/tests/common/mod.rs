//! Helpers shared by the CLI and service tests.
//!
//! `conforms` checks a document against a member of the published schema
//! bundle. It covers the keywords the bundle uses: `$ref` (local), `oneOf`,
//! `type`, `const`, `enum`, `properties`, `required`,
//! `additionalProperties: false`, `items` and `minimum`.

#![allow(dead_code)]

use serde_json::Value;

pub const SCHEMA: &str = include_str!("../../schemas/planadv.schema.json");

pub fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/blocks/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn bundle() -> Value {
    serde_json::from_str(SCHEMA).expect("schema bundle is JSON")
}

/// Panics with the violation if `doc` does not match `$defs/<def>`.
pub fn conforms(def: &str, doc: &Value) {
    if let Err(e) = check(def, doc) {
        panic!("{def}: {e}\n{}", serde_json::to_string_pretty(doc).unwrap());
    }
}

pub fn check(def: &str, doc: &Value) -> Result<(), String> {
    let root = bundle();
    let schema = root["$defs"].get(def).ok_or(format!("no definition {def}"))?;
    validate(&root, schema, doc, "$")
}

fn type_matches(name: &str, doc: &Value) -> bool {
    match name {
        "object" => doc.is_object(),
        "array" => doc.is_array(),
        "string" => doc.is_string(),
        "boolean" => doc.is_boolean(),
        "null" => doc.is_null(),
        "integer" => doc.is_i64() || doc.is_u64(),
        "number" => doc.is_number(),
        _ => false,
    }
}

fn validate(root: &Value, schema: &Value, doc: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").ok_or(format!("unsupported $ref {r}"))?;
        return validate(root, &root["$defs"][name], doc, path);
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matching = options.iter().filter(|s| validate(root, s, doc, path).is_ok()).count();
        if matching != 1 {
            return Err(format!("{path}: matches {matching} oneOf branches"));
        }
    }
    match schema.get("type") {
        Some(Value::String(t)) if !type_matches(t, doc) => return Err(format!("{path}: expected {t}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| t.as_str().is_some_and(|t| type_matches(t, doc))) => {
            return Err(format!("{path}: expected one of {ts:?}"))
        }
        _ => {}
    }
    if let Some(c) = schema.get("const") {
        if c != doc {
            return Err(format!("{path}: expected {c}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(doc) {
            return Err(format!("{path}: {doc} not in {options:?}"));
        }
    }
    if let (Some(min), Some(n)) = (schema.get("minimum").and_then(Value::as_f64), doc.as_f64()) {
        if n < min {
            return Err(format!("{path}: {n} < {min}"));
        }
    }
    if let Some(obj) = doc.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing `{key}`"));
            }
        }
        for (key, value) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(s) => validate(root, s, value, &format!("{path}.{key}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected `{key}`"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), doc.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            validate(root, items, item, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}
