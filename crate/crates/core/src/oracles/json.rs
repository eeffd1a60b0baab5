//! JSON form of finite oracles.
//!
//! ```json
//! {"level": "T1", "domain_size": 3, "table": [[[0]], [[1]], []], "undefined": [2]}
//! {"level": "basic", "family": [[0], [1]]}
//! ```
//!
//! `table[n]` is the family at `n` (a list of sets). T0/T1 entries may also be
//! written as a bare number `v` for `{{v}}`, T2 entries as a single set.
//! Indices listed in `undefined` are undefined whatever the table says. An
//! optional `points` array replaces `0..domain_size` as the domain (the
//! table is then aligned with `points`). Numbers may be JSON integers or
//! decimal strings (for values beyond 64 bits).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{Family, FiniteOracle, Level, NatSet, OracleError};
use crate::vm::Nat;

fn err(msg: impl Into<String>) -> OracleError {
    OracleError::Format(msg.into())
}

/// Parse a natural from a JSON integer or decimal string.
pub fn nat_from_json(v: &Value) -> Result<Nat, OracleError> {
    match v {
        Value::Number(n) => n.as_u64().map(Nat::from).ok_or_else(|| err(format!("not a natural number: {n}"))),
        Value::String(s) => s.parse::<Nat>().map_err(|_| err(format!("not a natural number: {s:?}"))),
        other => Err(err(format!("expected a natural number, found {other}"))),
    }
}

/// Render a natural as a JSON integer when it fits, else a decimal string.
pub fn nat_to_json(n: &Nat) -> Value {
    match u64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => Value::String(n.to_string()),
    }
}

fn set_from_json(v: &Value) -> Result<NatSet, OracleError> {
    v.as_array().ok_or_else(|| err("expected a set (array)"))?.iter().map(nat_from_json).collect()
}

fn family_from_json(v: &Value) -> Result<Family, OracleError> {
    let sets = v.as_array().ok_or_else(|| err("expected a family (array of sets)"))?;
    Ok(Family::new(sets.iter().map(set_from_json).collect::<Result<Vec<_>, _>>()?))
}

fn entry_from_json(level: Level, v: &Value) -> Result<Family, OracleError> {
    match (level, v) {
        (Level::T0 | Level::T1, Value::Number(_) | Value::String(_)) => Ok(Family::value(nat_from_json(v)?)),
        (Level::T0 | Level::T1, Value::Null) | (Level::T2, Value::Null) => Ok(Family::empty()),
        (Level::T2, Value::Array(items)) if items.iter().all(|x| !x.is_array()) && !items.is_empty() => {
            Ok(Family::new([set_from_json(v)?]))
        }
        _ => family_from_json(v),
    }
}

fn set_to_json(s: &NatSet) -> Value {
    Value::Array(s.iter().map(nat_to_json).collect())
}

fn family_to_json(f: &Family) -> Value {
    Value::Array(f.sets().iter().map(set_to_json).collect())
}

/// Parse an oracle document.
pub fn oracle_from_json(v: &Value) -> Result<FiniteOracle, OracleError> {
    let obj = v.as_object().ok_or_else(|| err("an oracle document is a JSON object"))?;
    for key in obj.keys() {
        if !["level", "domain_size", "table", "undefined", "points", "family"].contains(&key.as_str()) {
            return Err(err(format!("unknown key `{key}`")));
        }
    }
    let level: Level = obj.get("level").and_then(Value::as_str).ok_or_else(|| err("missing `level`"))?.parse()?;
    if level == Level::Basic {
        let fam = family_from_json(obj.get("family").ok_or_else(|| err("basic oracle without `family`"))?)?;
        return Ok(FiniteOracle::basic(fam));
    }
    let table = obj.get("table").and_then(Value::as_array).ok_or_else(|| err("missing `table`"))?;
    let points: Vec<Nat> = match obj.get("points") {
        Some(p) => p
            .as_array()
            .ok_or_else(|| err("`points` must be an array"))?
            .iter()
            .map(nat_from_json)
            .collect::<Result<_, _>>()?,
        None => {
            let n = match obj.get("domain_size") {
                Some(d) => d.as_u64().ok_or_else(|| err("`domain_size` must be a natural number"))?,
                None => table.len() as u64,
            };
            (0..n).map(Nat::from).collect()
        }
    };
    if table.len() > points.len() {
        return Err(err(format!("table has {} entries but the domain has {} points", table.len(), points.len())));
    }
    let undefined: Vec<Nat> = match obj.get("undefined") {
        Some(u) => u
            .as_array()
            .ok_or_else(|| err("`undefined` must be an array"))?
            .iter()
            .map(nat_from_json)
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let mut entries = BTreeMap::new();
    for (i, (p, e)) in points.iter().zip(table).enumerate() {
        let fam = entry_from_json(level, e).map_err(|e| err(format!("table[{i}]: {e}")))?;
        if !undefined.contains(p) {
            entries.insert(p.clone(), fam);
        }
    }
    FiniteOracle::from_parts(level, points, entries, None)
}

/// Parse an oracle from JSON text.
pub fn parse_oracle(text: &str) -> Result<FiniteOracle, OracleError> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(format!("line {}: {e}", e.line())))?;
    oracle_from_json(&v)
}

/// The JSON document of an oracle (inverse of [`oracle_from_json`]).
pub fn oracle_to_json(o: &FiniteOracle) -> Value {
    if let (Level::Basic, Some(f)) = (o.level(), o.constant_family()) {
        return json!({"level": "basic", "family": family_to_json(f)});
    }
    let points = o.points();
    let initial = points.iter().enumerate().all(|(i, p)| *p == Nat::from(i as u64));
    let table: Vec<Value> = points.iter().map(|p| family_to_json(o.entry(p))).collect();
    let undefined: Vec<Value> = points.iter().filter(|p| o.entry(p).is_empty()).map(nat_to_json).collect();
    let mut doc = json!({
        "level": o.level().name(),
        "domain_size": points.len(),
        "table": table,
        "undefined": undefined,
    });
    if !initial {
        doc["points"] = Value::Array(points.iter().map(nat_to_json).collect());
    }
    doc
}
