//! Ordered attribute-value structures.
//!
//! Every component reports its results as an [`AttrValue`]: an ordered list
//! of `(key, value)` pairs with unique keys. Two external renderings exist,
//! an s-expression form `((:day . 1) (:mon . 3))` and a JSON object form, and
//! both round-trip bit-identically.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value as Json;

use crate::sexpr::{self, Sexpr, SexprKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Str(String),
    Av(AttrValue),
    List(Vec<Value>),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_av(&self) -> Option<&AttrValue> {
        match self {
            Value::Av(av) => Some(av),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(l) => Some(l),
            _ => None,
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Str(s) => Json::from(s.as_str()),
            Value::Av(av) => av.to_json(),
            Value::List(l) => Json::Array(l.iter().map(Value::to_json).collect()),
        }
    }

    fn from_json(json: &Json) -> Result<Value, AvError> {
        match json {
            Json::Number(n) => n
                .as_i64()
                .map(Value::Int)
                .ok_or_else(|| AvError::Json(format!("non-integer number {n}"))),
            Json::String(s) => Ok(Value::Str(s.clone())),
            Json::Object(_) => AttrValue::from_json(json).map(Value::Av),
            Json::Array(items) => items
                .iter()
                .map(Value::from_json)
                .collect::<Result<_, _>>()
                .map(Value::List),
            other => Err(AvError::Json(format!("unsupported JSON value {other}"))),
        }
    }

    fn write_sexpr(&self, out: &mut String) {
        match self {
            Value::Int(i) => out.push_str(&i.to_string()),
            Value::Str(s) => sexpr::write_string(out, s),
            Value::Av(av) => av.write_sexpr(out),
            Value::List(items) => {
                out.push_str("(:list");
                for item in items {
                    out.push(' ');
                    item.write_sexpr(out);
                }
                out.push(')');
            }
        }
    }

    fn from_sexpr(node: &Sexpr) -> Result<Value, AvError> {
        match &node.kind {
            SexprKind::Int(i) => Ok(Value::Int(*i)),
            SexprKind::Str(s) => Ok(Value::Str(s.clone())),
            SexprKind::List(items) => match items.first().map(|n| &n.kind) {
                Some(SexprKind::Sym(head)) if head == ":list" => items[1..]
                    .iter()
                    .map(Value::from_sexpr)
                    .collect::<Result<_, _>>()
                    .map(Value::List),
                _ => AttrValue::from_sexpr(node).map(Value::Av),
            },
            SexprKind::Sym(s) => Err(AvError::Sexpr(format!(
                "bare symbol {s} at {} is not a value",
                node.pos
            ))),
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<AttrValue> for Value {
    fn from(av: AttrValue) -> Self {
        Value::Av(av)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AvError {
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("invalid JSON attribute-value structure: {0}")]
    Json(String),
    #[error("invalid s-expression attribute-value structure: {0}")]
    Sexpr(String),
}

/// An ordered attribute-value structure with unique keys.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrValue {
    pairs: Vec<(String, Value)>,
}

impl AttrValue {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a structure from pairs, rejecting duplicate keys.
    pub fn from_pairs<K, I>(pairs: I) -> Result<Self, AvError>
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        let mut av = AttrValue::new();
        for (k, v) in pairs {
            let k = k.into();
            if av.get(&k).is_some() {
                return Err(AvError::DuplicateKey(k));
            }
            av.pairs.push((k, v));
        }
        Ok(av)
    }

    /// Sets `key`, replacing an existing value in place or appending.
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        let key = key.into();
        let value = value.into();
        match self.pairs.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.pairs.push((key, value)),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.set(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_int(&self, key: &str) -> Option<i64> {
        self.get(key).and_then(Value::as_int)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.get(key).and_then(Value::as_str)
    }

    pub fn remove(&mut self, key: &str) -> Option<Value> {
        let idx = self.pairs.iter().position(|(k, _)| k == key)?;
        Some(self.pairs.remove(idx).1)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.pairs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(k, _)| k.as_str())
    }

    /// Appends the pairs of `other` whose keys are not present yet.
    pub fn merge(&mut self, other: &AttrValue) {
        for (k, v) in &other.pairs {
            if self.get(k).is_none() {
                self.pairs.push((k.clone(), v.clone()));
            }
        }
    }

    pub fn to_json(&self) -> Json {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.pairs {
            map.insert(k.clone(), v.to_json());
        }
        Json::Object(map)
    }

    pub fn from_json(json: &Json) -> Result<Self, AvError> {
        let Json::Object(map) = json else {
            return Err(AvError::Json(format!("expected object, found {json}")));
        };
        let mut av = AttrValue::new();
        for (k, v) in map {
            av.pairs.push((k.clone(), Value::from_json(v)?));
        }
        Ok(av)
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json_str(s: &str) -> Result<Self, AvError> {
        let json: Json = serde_json::from_str(s).map_err(|e| AvError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    /// Canonical s-expression rendering, e.g. `((:day . 1) (:mon . 3))`.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out);
        out
    }

    fn write_sexpr(&self, out: &mut String) {
        out.push('(');
        for (i, (k, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str("(:");
            out.push_str(k);
            out.push_str(" . ");
            v.write_sexpr(out);
            out.push(')');
        }
        out.push(')');
    }

    pub fn from_sexpr_str(s: &str) -> Result<Self, AvError> {
        let nodes = sexpr::read_all(s).map_err(|e| AvError::Sexpr(e.to_string()))?;
        match nodes.as_slice() {
            [node] => Self::from_sexpr(node),
            _ => Err(AvError::Sexpr(format!(
                "expected one structure, found {} forms",
                nodes.len()
            ))),
        }
    }

    fn from_sexpr(node: &Sexpr) -> Result<Self, AvError> {
        let SexprKind::List(pairs) = &node.kind else {
            return Err(AvError::Sexpr(format!("expected list at {}", node.pos)));
        };
        let mut av = AttrValue::new();
        for pair in pairs {
            let SexprKind::List(parts) = &pair.kind else {
                return Err(AvError::Sexpr(format!("expected pair at {}", pair.pos)));
            };
            let key = match parts.first().map(|n| &n.kind) {
                Some(SexprKind::Sym(k)) if k.starts_with(':') && k.len() > 1 => k[1..].to_string(),
                _ => return Err(AvError::Sexpr(format!("expected :key at {}", pair.pos))),
            };
            let value = match &parts[1..] {
                [dot, v] if dot.is_sym(".") => Value::from_sexpr(v)?,
                // Nested structure written without the dot: (:key (:a . 1) ...).
                rest if !rest.is_empty() && rest.iter().all(is_pair) => {
                    let list = Sexpr {
                        kind: SexprKind::List(rest.to_vec()),
                        pos: pair.pos,
                    };
                    Value::Av(AttrValue::from_sexpr(&list)?)
                }
                [v] => Value::from_sexpr(v)?,
                // (:mods "a" "b")
                rest if rest.len() > 1 => Value::List(
                    rest.iter().map(Value::from_sexpr).collect::<Result<_, _>>()?,
                ),
                _ => return Err(AvError::Sexpr(format!("malformed pair at {}", pair.pos))),
            };
            if av.get(&key).is_some() {
                return Err(AvError::DuplicateKey(key));
            }
            av.pairs.push((key, value));
        }
        Ok(av)
    }
}

fn is_pair(node: &Sexpr) -> bool {
    match &node.kind {
        SexprKind::List(parts) => matches!(parts.first().map(|n| &n.kind), Some(SexprKind::Sym(k)) if k.starts_with(':') && k != ":list"),
        _ => false,
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

impl Serialize for AttrValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AttrValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = Json::deserialize(deserializer)?;
        AttrValue::from_json(&json).map_err(D::Error::custom)
    }
}
