//! Text and JSON forms of game traces.
//!
//! JSON: `{"init": {"m", "secret_index", "secret"}, "moves": [{"a", "n_or_u",
//! "nimue_choice", "nimue_set", "merlin"}], "terminal": {...}, "verdict"}`.
//! A declaration appears as a final move without Nimue/Merlin fields.

use serde_json::{json, Value};

use super::{GameTrace, LeafKind, Move, Terminal};
use crate::oracles::json::{nat_from_json, nat_to_json};
use crate::oracles::{NatSet, OracleError};
use crate::vm::Nat;

fn set_json(s: &NatSet) -> Value {
    Value::Array(s.iter().map(nat_to_json).collect())
}

fn terminal_json(t: &Terminal) -> Value {
    match t {
        Terminal::Declared { arthur, value, success } => {
            json!({"kind": "declared", "a": nat_to_json(arthur), "value": nat_to_json(value), "success": success})
        }
        Terminal::QueryEmptyFamily { arthur, n } => {
            json!({"kind": "query_empty_family", "a": nat_to_json(arthur), "n": nat_to_json(n)})
        }
        Terminal::NimueEmptySet => json!({"kind": "nimue_empty_set"}),
        Terminal::NimueMissing { n } => json!({"kind": "nimue_missing", "n": nat_to_json(n)}),
        Terminal::ArthurMalformed { arthur } => json!({"kind": "arthur_malformed", "a": nat_to_json(arthur)}),
        Terminal::ArthurFault { query } => json!({"kind": "arthur_fault", "query": nat_to_json(query)}),
        Terminal::ArthurTimeout => json!({"kind": "arthur_timeout"}),
        Terminal::DepthExhausted => json!({"kind": "depth_exhausted"}),
    }
}

fn verdict_name(k: LeafKind) -> &'static str {
    match k {
        LeafKind::Win => "Win",
        LeafKind::Lose => "Lose",
        LeafKind::Unknown => "Unknown",
    }
}

/// JSON form of a trace.
pub fn trace_to_json(t: &GameTrace) -> Value {
    let mut moves: Vec<Value> = t
        .moves
        .iter()
        .map(|mv| {
            json!({
                "a": nat_to_json(&mv.arthur),
                "n_or_u": nat_to_json(&mv.query),
                "nimue_choice": mv.nimue_choice,
                "nimue_set": set_json(&mv.nimue_set),
                "merlin": mv.merlin.as_ref().map(nat_to_json),
            })
        })
        .collect();
    if let Terminal::Declared { arthur, value, .. } = &t.terminal {
        moves.push(json!({"a": nat_to_json(arthur), "n_or_u": nat_to_json(value)}));
    }
    json!({
        "init": {"m": nat_to_json(&t.m), "secret_index": t.secret_index, "secret": set_json(&t.secret)},
        "moves": moves,
        "terminal": terminal_json(&t.terminal),
        "verdict": verdict_name(t.terminal.kind()),
    })
}

fn err(msg: impl Into<String>) -> OracleError {
    OracleError::Format(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, OracleError> {
    v.get(key).ok_or_else(|| err(format!("missing `{key}`")))
}

fn set_from(v: &Value) -> Result<NatSet, OracleError> {
    v.as_array().ok_or_else(|| err("expected an array"))?.iter().map(nat_from_json).collect()
}

fn nat_field(v: &Value, key: &str) -> Result<Nat, OracleError> {
    nat_from_json(field(v, key)?)
}

fn terminal_from(v: &Value) -> Result<Terminal, OracleError> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| err("`kind` must be a string"))?;
    Ok(match kind {
        "declared" => Terminal::Declared {
            arthur: nat_field(v, "a")?,
            value: nat_field(v, "value")?,
            success: field(v, "success")?.as_bool().ok_or_else(|| err("`success` must be a boolean"))?,
        },
        "query_empty_family" => Terminal::QueryEmptyFamily { arthur: nat_field(v, "a")?, n: nat_field(v, "n")? },
        "nimue_empty_set" => Terminal::NimueEmptySet,
        "nimue_missing" => Terminal::NimueMissing { n: nat_field(v, "n")? },
        "arthur_malformed" => Terminal::ArthurMalformed { arthur: nat_field(v, "a")? },
        "arthur_fault" => Terminal::ArthurFault { query: nat_field(v, "query")? },
        "arthur_timeout" => Terminal::ArthurTimeout,
        "depth_exhausted" => Terminal::DepthExhausted,
        other => return Err(err(format!("unknown terminal kind `{other}`"))),
    })
}

/// Parse the JSON form of a trace.
pub fn trace_from_json(v: &Value) -> Result<GameTrace, OracleError> {
    let init = field(v, "init")?;
    let terminal = terminal_from(field(v, "terminal")?)?;
    let mut moves = Vec::new();
    for mv in field(v, "moves")?.as_array().ok_or_else(|| err("`moves` must be an array"))? {
        if mv.get("nimue_set").is_none() {
            continue; // the declaration, restated in the terminal
        }
        moves.push(Move {
            arthur: nat_field(mv, "a")?,
            query: nat_field(mv, "n_or_u")?,
            nimue_choice: field(mv, "nimue_choice")?.as_u64().ok_or_else(|| err("bad `nimue_choice`"))? as usize,
            nimue_set: set_from(field(mv, "nimue_set")?)?,
            merlin: match mv.get("merlin") {
                None | Some(Value::Null) => None,
                Some(x) => Some(nat_from_json(x)?),
            },
        });
    }
    Ok(GameTrace {
        m: nat_field(init, "m")?,
        secret_index: field(init, "secret_index")?.as_u64().ok_or_else(|| err("bad `secret_index`"))? as usize,
        secret: set_from(field(init, "secret")?)?,
        moves,
        terminal,
    })
}

fn fmt_set(s: &NatSet) -> String {
    let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Line-oriented text form.
pub fn trace_to_text(t: &GameTrace) -> String {
    let mut out = format!("init m={} secret#{}={}\n", t.m, t.secret_index, fmt_set(&t.secret));
    for (i, mv) in t.moves.iter().enumerate() {
        let reply = mv.merlin.as_ref().map_or("-".to_string(), |x| x.to_string());
        out.push_str(&format!(
            "turn {i}: query {} | nimue #{} {} | merlin {}\n",
            mv.query,
            mv.nimue_choice,
            fmt_set(&mv.nimue_set),
            reply
        ));
    }
    out.push_str(&format!("end: {} => {}\n", t.terminal.describe(), verdict_name(t.terminal.kind())));
    out
}
