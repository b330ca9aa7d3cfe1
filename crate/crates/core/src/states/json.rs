//! JSON state documents.
//!
//! ```json
//! {"k": 3, "n": 5, "coords": "xy", "x": ["1", "2/3", ...], "y": [...]}
//! ```
//!
//! Arrays are named `x`/`y`, `p`/`q`, `X`/`Y` or `a`/`b`/`c`/`d` according to
//! `coords`. Scalars use the backend's encoding (see [`ScalarIo`]).

use serde_json::{json, Map, Value};

use super::{CornerState, EdgeWeights, MapParams, PQState, XYState};
use crate::error::{Error, Result};
use crate::scalar::ScalarIo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordKind {
    Xy,
    Pq,
    Corner,
    Edge,
}

impl CoordKind {
    pub fn name(self) -> &'static str {
        match self {
            CoordKind::Xy => "xy",
            CoordKind::Pq => "pq",
            CoordKind::Corner => "corner",
            CoordKind::Edge => "edge",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "xy" => Ok(CoordKind::Xy),
            "pq" => Ok(CoordKind::Pq),
            "corner" => Ok(CoordKind::Corner),
            "edge" => Ok(CoordKind::Edge),
            other => Err(Error::Parse(format!(
                "unknown coords {other:?} (expected xy, pq, corner or edge)"
            ))),
        }
    }
}

/// A state in any of the supported charts.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState<S> {
    Xy(XYState<S>),
    Pq(PQState<S>),
    Corner(CornerState<S>),
    Edge(EdgeWeights<S>),
}

fn encode<S: ScalarIo>(v: &[S]) -> Value {
    Value::Array(v.iter().map(ScalarIo::to_json).collect())
}

fn field_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("missing or invalid integer field {key:?}")))
}

fn decode<S: ScalarIo>(obj: &Map<String, Value>, key: &str) -> Result<Vec<S>> {
    let arr = obj
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("missing array {key:?}")))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| S::from_json(v).map_err(|e| Error::Parse(format!("{key}_{}: {e}", i + 1))))
        .collect()
}

impl<S: ScalarIo> AnyState<S> {
    pub fn kind(&self) -> CoordKind {
        match self {
            AnyState::Xy(_) => CoordKind::Xy,
            AnyState::Pq(_) => CoordKind::Pq,
            AnyState::Corner(_) => CoordKind::Corner,
            AnyState::Edge(_) => CoordKind::Edge,
        }
    }

    /// `(k, n)`; corner states report `k = 3`.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyState::Xy(s) => (s.params.k, s.params.n),
            AnyState::Pq(s) => (s.params.k, s.params.n),
            AnyState::Corner(s) => (3, s.n),
            AnyState::Edge(s) => (s.params.k, s.params.n),
        }
    }

    pub fn to_json(&self) -> Value {
        let (k, n) = self.shape();
        let mut doc = json!({ "k": k, "n": n, "coords": self.kind().name() });
        let obj = doc.as_object_mut().expect("object literal");
        match self {
            AnyState::Xy(s) => {
                obj.insert("x".into(), encode(&s.x));
                obj.insert("y".into(), encode(&s.y));
            }
            AnyState::Pq(s) => {
                obj.insert("p".into(), encode(&s.p));
                obj.insert("q".into(), encode(&s.q));
            }
            AnyState::Corner(s) => {
                obj.insert("X".into(), encode(&s.x));
                obj.insert("Y".into(), encode(&s.y));
            }
            AnyState::Edge(s) => {
                for (key, v) in [("a", &s.a), ("b", &s.b), ("c", &s.c), ("d", &s.d)] {
                    obj.insert(key.into(), encode(v));
                }
            }
        }
        doc
    }

    /// Parses and validates a document, reporting the first violated
    /// invariant.
    pub fn from_json(doc: &Value) -> Result<Self> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::Parse("state document must be a JSON object".into()))?;
        let coords = obj
            .get("coords")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing string field \"coords\"".into()))?;
        let kind = CoordKind::parse(coords)?;
        let n = field_usize(obj, "n")?;
        let k = match (kind, obj.get("k")) {
            (CoordKind::Corner, None) => 3,
            _ => field_usize(obj, "k")?,
        };
        let params = MapParams::new(k, n)?;
        match kind {
            CoordKind::Xy => Ok(AnyState::Xy(XYState::new(
                params,
                decode(obj, "x")?,
                decode(obj, "y")?,
            )?)),
            CoordKind::Pq => Ok(AnyState::Pq(PQState::new(
                params,
                decode(obj, "p")?,
                decode(obj, "q")?,
            )?)),
            CoordKind::Corner => {
                if k != 3 {
                    return Err(Error::WrongSpan {
                        expected: 3,
                        got: k,
                    });
                }
                let s = CornerState::new(decode(obj, "X")?, decode(obj, "Y")?)?;
                if s.n != n {
                    return Err(Error::InvariantViolation(format!(
                        "X has {} entries, expected n = {n}",
                        s.n
                    )));
                }
                Ok(AnyState::Corner(s))
            }
            CoordKind::Edge => Ok(AnyState::Edge(EdgeWeights::new(
                params,
                decode(obj, "a")?,
                decode(obj, "b")?,
                decode(obj, "c")?,
                decode(obj, "d")?,
            )?)),
        }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        Self::from_json(&doc)
    }
}
