//! Canonical JSON rendering for reports and artifacts: object keys sorted,
//! stable field layout, trailing newline. Two equal runs must produce
//! byte-identical files, so everything written to disk funnels through
//! these helpers and nothing here depends on time, environment, or map
//! iteration order.

use serde::Serialize;
use serde_json::Value;

/// Pretty canonical form: sorted keys, two-space indent, trailing newline.
pub fn canonical(value: &impl Serialize) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut s = serde_json::to_string_pretty(&v).expect("JSON rendering");
    s.push('\n');
    s
}

/// Compact single-line canonical form with trailing newline, for
/// JSON-lines streams.
pub fn canonical_line(value: &impl Serialize) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut s = serde_json::to_string(&v).expect("JSON rendering");
    s.push('\n');
    s
}

/// Canonicalize an already-built value in place (object keys in
/// serde_json's default map are sorted, so a round-trip suffices).
pub fn sorted(value: Value) -> Value {
    serde_json::to_value(&value).expect("value round-trip")
}
