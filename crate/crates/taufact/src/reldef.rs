//! Strict JSON loader for relation definition files.
//!
//! A definition file is `{"domain": {"window": B, "witness_bound": W},
//! "relation": <spec>}` where `<spec>` is a tagged object, e.g.
//! `{"family":"modn","n":4}` or `{"family":"compose","first":…,"second":…}`.
//! Every object is checked for unknown fields, and errors name the JSON
//! path at fault so a typo in a nested block is reported as
//! `relation.first.blocks[1]: …` rather than as a silent default.

use crate::domain::{Elem, Window};
use crate::factor::tau_divides_relation;
use crate::relation::{BlockSpec, PrimePattern, Relation, SetSpec};
use serde_json::{Map, Value};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelDefError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
}

fn shape(path: &str, message: impl Into<String>) -> RelDefError {
    RelDefError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, RelDefError> {
    v.as_object()
        .ok_or_else(|| shape(path, "expected an object"))
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), RelDefError> {
    for key in m.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(shape(
                path,
                format!("unknown field `{key}` (allowed: {})", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, RelDefError> {
    m.get(key)
        .ok_or_else(|| shape(path, format!("missing field `{key}`")))
}

fn as_i64(v: &Value, path: &str) -> Result<i64, RelDefError> {
    v.as_i64().ok_or_else(|| shape(path, "expected an integer"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64, RelDefError> {
    v.as_u64()
        .ok_or_else(|| shape(path, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, RelDefError> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn elem(v: &Value, path: &str) -> Result<Elem, RelDefError> {
    let n = as_i64(v, path)?;
    Elem::new(n).map_err(|e| shape(path, e.to_string()))
}

/// Parse a complete definition file.
pub fn parse_definition(text: &str) -> Result<(Window, Relation), RelDefError> {
    let v: Value = serde_json::from_str(text)?;
    let top = as_object(&v, "$")?;
    check_keys(top, &["domain", "relation"], "$")?;
    let dom = as_object(field(top, "domain", "$")?, "domain")?;
    check_keys(dom, &["window", "witness_bound"], "domain")?;
    let bound = as_u64(field(dom, "window", "domain")?, "domain.window")?;
    let witness = as_u64(
        field(dom, "witness_bound", "domain")?,
        "domain.witness_bound",
    )?;
    let window = Window::new(bound, witness).map_err(|e| shape("domain", e.to_string()))?;
    let relation = parse_relation(field(top, "relation", "$")?, "relation", &window)?;
    Ok((window, relation))
}

/// Parse one relation spec; `window` supplies the domain for derived
/// relations that need it.
pub fn parse_relation(v: &Value, path: &str, window: &Window) -> Result<Relation, RelDefError> {
    let m = as_object(v, path)?;
    let family = field(m, "family", path)?
        .as_str()
        .ok_or_else(|| shape(path, "field `family` must be a string"))?;
    match family {
        "full" => {
            check_keys(m, &["family"], path)?;
            Ok(Relation::Full)
        }
        "ideal_containment" => {
            check_keys(m, &["family"], path)?;
            Ok(Relation::IdealContainment)
        }
        "extensional" => {
            check_keys(m, &["family", "pairs"], path)?;
            let arr = as_array(field(m, "pairs", path)?, &format!("{path}.pairs"))?;
            let mut pairs = Vec::new();
            for (i, pv) in arr.iter().enumerate() {
                let ppath = format!("{path}.pairs[{i}]");
                let pa = as_array(pv, &ppath)?;
                if pa.len() != 2 {
                    return Err(shape(&ppath, "expected a pair [a, b]"));
                }
                pairs.push((elem(&pa[0], &ppath)?.get(), elem(&pa[1], &ppath)?.get()));
            }
            Relation::extensional(pairs).map_err(|e| shape(path, e.to_string()))
        }
        "product" => {
            check_keys(m, &["family", "set"], path)?;
            let arr = as_array(field(m, "set", path)?, &format!("{path}.set"))?;
            let mut elems = Vec::new();
            for (i, ev) in arr.iter().enumerate() {
                elems.push(as_i64(ev, &format!("{path}.set[{i}]"))?);
            }
            Relation::product(elems).map_err(|e| shape(path, e.to_string()))
        }
        "modn" => {
            check_keys(m, &["family", "n"], path)?;
            let n = as_i64(field(m, "n", path)?, &format!("{path}.n"))?;
            Ok(Relation::modn(n))
        }
        "partition" => {
            check_keys(m, &["family", "blocks"], path)?;
            let arr = as_array(field(m, "blocks", path)?, &format!("{path}.blocks"))?;
            let mut blocks = Vec::new();
            for (i, bv) in arr.iter().enumerate() {
                blocks.push(parse_block(bv, &format!("{path}.blocks[{i}]"))?);
            }
            Relation::partition(blocks).map_err(|e| shape(path, e.to_string()))
        }
        "pattern" => {
            check_keys(m, &["family", "pairs"], path)?;
            let arr = as_array(field(m, "pairs", path)?, &format!("{path}.pairs"))?;
            let mut pairs = Vec::new();
            for (i, pv) in arr.iter().enumerate() {
                let ppath = format!("{path}.pairs[{i}]");
                let pm = as_object(pv, &ppath)?;
                check_keys(pm, &["left", "right"], &ppath)?;
                let side = |key: &str| -> Result<PrimePattern, RelDefError> {
                    let spath = format!("{ppath}.{key}");
                    let sa = as_array(field(pm, key, &ppath)?, &spath)?;
                    let mut primes = Vec::new();
                    for (j, sv) in sa.iter().enumerate() {
                        primes.push(as_u64(sv, &format!("{spath}[{j}]"))?);
                    }
                    PrimePattern::new(primes).map_err(|e| shape(&spath, e.to_string()))
                };
                pairs.push((side("left")?, side("right")?));
            }
            Ok(Relation::pattern(pairs))
        }
        "compose" => {
            check_keys(m, &["family", "first", "second"], path)?;
            let first = parse_relation(field(m, "first", path)?, &format!("{path}.first"), window)?;
            let second =
                parse_relation(field(m, "second", path)?, &format!("{path}.second"), window)?;
            Ok(Relation::compose(first, second))
        }
        "inverse" => {
            check_keys(m, &["family", "of"], path)?;
            let inner = parse_relation(field(m, "of", path)?, &format!("{path}.of"), window)?;
            Ok(Relation::inverse_of(inner))
        }
        "union" | "intersection" => {
            check_keys(m, &["family", "first", "second"], path)?;
            let first = parse_relation(field(m, "first", path)?, &format!("{path}.first"), window)?;
            let second =
                parse_relation(field(m, "second", path)?, &format!("{path}.second"), window)?;
            Ok(if family == "union" {
                Relation::union(first, second)
            } else {
                Relation::intersection(first, second)
            })
        }
        "identity_on" => {
            check_keys(m, &["family", "set"], path)?;
            let set = parse_set_spec(field(m, "set", path)?, &format!("{path}.set"), window)?;
            Ok(Relation::identity_on(set))
        }
        "tau_divides" => {
            check_keys(m, &["family", "inner"], path)?;
            let inner = parse_relation(field(m, "inner", path)?, &format!("{path}.inner"), window)?;
            Ok(tau_divides_relation(&inner, window))
        }
        other => Err(shape(
            path,
            format!(
                "unknown family `{other}` (known: full, ideal_containment, extensional, \
                 product, modn, partition, pattern, compose, inverse, union, intersection, \
                 identity_on, tau_divides)"
            ),
        )),
    }
}

fn parse_block(v: &Value, path: &str) -> Result<BlockSpec, RelDefError> {
    let m = as_object(v, path)?;
    if m.len() != 1 {
        return Err(shape(
            path,
            "expected exactly one of `negatives`, `finite`, `positives_except`",
        ));
    }
    let (key, val) = m.iter().next().unwrap();
    match key.as_str() {
        "negatives" => {
            if val != &Value::Bool(true) {
                return Err(shape(path, "`negatives` must be true"));
            }
            Ok(BlockSpec::Negatives)
        }
        "finite" => {
            let arr = as_array(val, path)?;
            let mut set = BTreeSet::new();
            for (i, ev) in arr.iter().enumerate() {
                set.insert(elem(ev, &format!("{path}.finite[{i}]"))?);
            }
            Ok(BlockSpec::Finite(set))
        }
        "positives_except" => {
            let arr = as_array(val, path)?;
            let mut set = BTreeSet::new();
            for (i, ev) in arr.iter().enumerate() {
                let epath = format!("{path}.positives_except[{i}]");
                let n = as_u64(ev, &epath)?;
                if n == 0 {
                    return Err(shape(&epath, "excluded values must be positive"));
                }
                set.insert(n);
            }
            Ok(BlockSpec::PositivesExcept(set))
        }
        other => Err(shape(
            path,
            format!("unknown block kind `{other}` (known: negatives, finite, positives_except)"),
        )),
    }
}

fn parse_set_spec(v: &Value, path: &str, window: &Window) -> Result<SetSpec, RelDefError> {
    let m = as_object(v, path)?;
    if m.len() != 1 {
        return Err(shape(
            path,
            "expected exactly one of `all`, `finite`, `image_of`, `coimage_of`",
        ));
    }
    let (key, val) = m.iter().next().unwrap();
    match key.as_str() {
        "all" => {
            if val != &Value::Bool(true) {
                return Err(shape(path, "`all` must be true"));
            }
            Ok(SetSpec::All)
        }
        "finite" => {
            let arr = as_array(val, path)?;
            let mut set = BTreeSet::new();
            for (i, ev) in arr.iter().enumerate() {
                set.insert(elem(ev, &format!("{path}.finite[{i}]"))?);
            }
            Ok(SetSpec::Finite(set))
        }
        "image_of" => {
            let inner = parse_relation(val, &format!("{path}.image_of"), window)?;
            Ok(SetSpec::ImageOf(Box::new(inner)))
        }
        "coimage_of" => {
            let inner = parse_relation(val, &format!("{path}.coimage_of"), window)?;
            Ok(SetSpec::CoimageOf(Box::new(inner)))
        }
        other => Err(shape(
            path,
            format!("unknown set kind `{other}` (known: all, finite, image_of, coimage_of)"),
        )),
    }
}

/// Serialize a relation back to its spec form. Derived divisibility
/// relations re-bind to the enclosing file's domain when re-parsed.
pub fn relation_to_value(r: &Relation) -> Value {
    match r {
        Relation::Full => serde_json::json!({"family": "full"}),
        Relation::IdealContainment => serde_json::json!({"family": "ideal_containment"}),
        Relation::Extensional(pairs) => {
            let list: Vec<Value> = pairs
                .iter()
                .map(|(a, b)| serde_json::json!([a.get(), b.get()]))
                .collect();
            serde_json::json!({"family": "extensional", "pairs": list})
        }
        Relation::Product(set) => {
            let list: Vec<i64> = set.iter().map(|e| e.get()).collect();
            serde_json::json!({"family": "product", "set": list})
        }
        Relation::ModN(n) => serde_json::json!({"family": "modn", "n": n}),
        Relation::Partition(blocks) => {
            let list: Vec<Value> = blocks
                .iter()
                .map(|b| match b {
                    BlockSpec::Negatives => serde_json::json!({"negatives": true}),
                    BlockSpec::Finite(set) => {
                        let vals: Vec<i64> = set.iter().map(|e| e.get()).collect();
                        serde_json::json!({"finite": vals})
                    }
                    BlockSpec::PositivesExcept(set) => {
                        let vals: Vec<u64> = set.iter().copied().collect();
                        serde_json::json!({"positives_except": vals})
                    }
                })
                .collect();
            serde_json::json!({"family": "partition", "blocks": list})
        }
        Relation::Pattern(pairs) => {
            let list: Vec<Value> = pairs
                .iter()
                .map(|(l, r)| {
                    serde_json::json!({
                        "left": l.primes().iter().copied().collect::<Vec<u64>>(),
                        "right": r.primes().iter().copied().collect::<Vec<u64>>(),
                    })
                })
                .collect();
            serde_json::json!({"family": "pattern", "pairs": list})
        }
        Relation::Compose(first, second) => serde_json::json!({
            "family": "compose",
            "first": relation_to_value(first),
            "second": relation_to_value(second),
        }),
        Relation::Inverse(inner) => serde_json::json!({
            "family": "inverse",
            "of": relation_to_value(inner),
        }),
        Relation::Union(a, b) => serde_json::json!({
            "family": "union",
            "first": relation_to_value(a),
            "second": relation_to_value(b),
        }),
        Relation::Intersection(a, b) => serde_json::json!({
            "family": "intersection",
            "first": relation_to_value(a),
            "second": relation_to_value(b),
        }),
        Relation::IdentityOn(set) => {
            let spec = match set {
                SetSpec::All => serde_json::json!({"all": true}),
                SetSpec::Finite(vals) => {
                    let list: Vec<i64> = vals.iter().map(|e| e.get()).collect();
                    serde_json::json!({"finite": list})
                }
                SetSpec::ImageOf(inner) => {
                    serde_json::json!({"image_of": relation_to_value(inner)})
                }
                SetSpec::CoimageOf(inner) => {
                    serde_json::json!({"coimage_of": relation_to_value(inner)})
                }
            };
            serde_json::json!({"family": "identity_on", "set": spec})
        }
        Relation::TauDivides(inner, _) => serde_json::json!({
            "family": "tau_divides",
            "inner": relation_to_value(inner),
        }),
    }
}

/// A complete definition file for a relation over the given window.
pub fn definition_to_value(r: &Relation, window: &Window) -> Value {
    serde_json::json!({
        "domain": {"window": window.bound(), "witness_bound": window.witness_bound()},
        "relation": relation_to_value(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<(Window, Relation), RelDefError> {
        parse_definition(text)
    }

    #[test]
    fn modn_file_round_trip() {
        let (window, rel) = parse(
            r#"{"domain":{"window":20,"witness_bound":60},"relation":{"family":"modn","n":4}}"#,
        )
        .unwrap();
        assert_eq!(window.bound(), 20);
        assert_eq!(rel.to_string(), "modn(4)");
        let back = definition_to_value(&rel, &window);
        let (w2, r2) = parse(&back.to_string()).unwrap();
        assert_eq!(w2, window);
        assert_eq!(r2.enumerate(&window), rel.enumerate(&window));
    }

    #[test]
    fn partition_blocks_match_the_documented_shape() {
        let text = r#"{
            "domain": {"window": 10, "witness_bound": 20},
            "relation": {"family": "partition", "blocks": [
                {"negatives": true},
                {"finite": [2]},
                {"positives_except": [1, 2]}
            ]}
        }"#;
        let (window, rel) = parse(text).unwrap();
        let e = |v: i64| Elem::new(v).unwrap();
        assert!(rel.holds(e(3), e(5), &window));
        assert!(!rel.holds(e(2), e(3), &window));
        assert!(rel.holds(e(-2), e(-7), &window));
    }

    #[test]
    fn nested_compose_round_trip() {
        let text = r#"{
            "domain": {"window": 12, "witness_bound": 40},
            "relation": {"family": "compose",
                "first": {"family": "modn", "n": 4},
                "second": {"family": "inverse", "of": {"family": "extensional", "pairs": [[2, 4]]}}}
        }"#;
        let (window, rel) = parse(text).unwrap();
        let back = definition_to_value(&rel, &window);
        let (_, r2) = parse(&back.to_string()).unwrap();
        assert_eq!(r2.enumerate(&window), rel.enumerate(&window));
    }

    #[test]
    fn unknown_field_is_rejected_with_path() {
        let err = parse(
            r#"{"domain":{"window":10,"witness_bound":20},"relation":{"family":"modn","n":4,"m":2}}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("relation: unknown field `m`"),
            "{err}"
        );
    }

    #[test]
    fn nested_errors_name_their_path() {
        let err = parse(
            r#"{"domain":{"window":10,"witness_bound":20},
                "relation":{"family":"compose",
                    "first":{"family":"partition","blocks":[{"negatives":true},{"finit":[2]}]},
                    "second":{"family":"full"}}}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("relation.first.blocks[1]"),
            "{err}"
        );
    }

    #[test]
    fn bad_window_is_a_domain_error() {
        let err =
            parse(r#"{"domain":{"window":30,"witness_bound":10},"relation":{"family":"full"}}"#)
                .unwrap_err();
        assert!(err.to_string().starts_with("domain:"), "{err}");
    }

    #[test]
    fn units_rejected_in_pairs_but_allowed_in_exclusions() {
        let err = parse(
            r#"{"domain":{"window":10,"witness_bound":20},"relation":{"family":"extensional","pairs":[[1,2]]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("pairs[0]"), "{err}");
        let ok = parse(
            r#"{"domain":{"window":10,"witness_bound":20},
                "relation":{"family":"partition","blocks":[{"negatives":true},{"positives_except":[1]}]}}"#,
        );
        assert!(ok.is_ok());
        let zero = parse(
            r#"{"domain":{"window":10,"witness_bound":20},
                "relation":{"family":"partition","blocks":[{"negatives":true},{"positives_except":[0]}]}}"#,
        );
        assert!(zero.is_err());
    }

    #[test]
    fn unknown_family_lists_known_ones() {
        let err = parse(
            r#"{"domain":{"window":10,"witness_bound":20},"relation":{"family":"congruence"}}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown family `congruence`"));
        assert!(msg.contains("modn"));
    }

    #[test]
    fn tau_divides_binds_the_file_window() {
        let text = r#"{
            "domain": {"window": 12, "witness_bound": 24},
            "relation": {"family": "tau_divides", "inner": {"family": "full"}}
        }"#;
        let (window, rel) = parse(text).unwrap();
        let e = |v: i64| Elem::new(v).unwrap();
        assert!(rel.holds(e(2), e(8), &window));
        assert!(!rel.holds(e(8), e(2), &window));
    }

    #[test]
    fn pattern_parse_and_membership() {
        let text = r#"{
            "domain": {"window": 30, "witness_bound": 60},
            "relation": {"family": "pattern", "pairs": [{"left": [3], "right": [2]}]}
        }"#;
        let (window, rel) = parse(text).unwrap();
        let e = |v: i64| Elem::new(v).unwrap();
        assert!(rel.holds(e(9), e(8), &window));
        assert!(!rel.holds(e(9), e(6), &window));
        let err = parse(
            r#"{"domain":{"window":10,"witness_bound":20},
                "relation":{"family":"pattern","pairs":[{"left":[4],"right":[2]}]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("pairs[0].left"), "{err}");
    }
}
