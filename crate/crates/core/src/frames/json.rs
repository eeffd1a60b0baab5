//! The frame file format: `{"elements": k, "leq": [[bool]]}` with the
//! operations derived, or `{"poset": [[covers]]}` for the down-set frame
//! (`covers[i]` lists the points directly below point `i`). Either form
//! may carry `"names": [string]` naming the elements (resp. the points).

use serde::Deserialize;
use serde_json::{json, Value};

use super::{FiniteFrame, FrameError, Nucleus, Poset};

#[derive(Deserialize)]
#[serde(untagged)]
enum FrameFile {
    Tables { elements: usize, leq: Vec<Vec<bool>>, names: Option<Vec<String>> },
    Poset { poset: Vec<Vec<usize>>, names: Option<Vec<String>> },
}

/// Build a frame from its JSON description.
pub fn frame_from_json(v: &Value) -> Result<FiniteFrame, FrameError> {
    let file: FrameFile = serde_json::from_value(v.clone())
        .map_err(|_| FrameError::Format("expected {elements, leq} or {poset}".into()))?;
    match file {
        FrameFile::Tables { elements, leq, names } => {
            let names = names.unwrap_or_else(|| (0..elements).map(|i| i.to_string()).collect());
            if names.len() != elements {
                return Err(FrameError::Format(format!("{} names for {elements} elements", names.len())));
            }
            FiniteFrame::from_order(names, leq)
        }
        FrameFile::Poset { poset, names } => {
            let n = poset.len();
            let names = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
            if names.len() != n {
                return Err(FrameError::Format(format!("{} names for {n} points", names.len())));
            }
            let pairs: Vec<(usize, usize)> =
                poset.iter().enumerate().flat_map(|(i, below)| below.iter().map(move |&b| (b, i))).collect();
            Ok(FiniteFrame::downsets(&Poset::from_relation(names, &pairs)?))
        }
    }
}

/// Parse a frame file's text.
pub fn parse_frame(text: &str) -> Result<FiniteFrame, FrameError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FrameError::Format(e.to_string()))?;
    frame_from_json(&v)
}

/// The explicit-tables form of a frame, with names.
pub fn frame_to_json(f: &FiniteFrame) -> Value {
    let leq: Vec<Vec<bool>> = f.elements().map(|a| f.elements().map(|b| f.le(a, b)).collect()).collect();
    json!({ "elements": f.len(), "leq": leq, "names": f.names() })
}

/// A nucleus as its table of element indices.
pub fn nucleus_to_json(n: &Nucleus) -> Value {
    json!(n.map)
}
