//! Shared fixtures and independent reference implementations for the
//! integration tests.

#![allow(dead_code)]

pub mod compounds;
pub mod fcp_check;
pub mod naive_fst;
pub mod nesting;
pub mod tag_corpus;

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use ie_core::avs::{AttrValue, Value};
use ie_core::kb::{load_kb, KnowledgeBase, PipelineConfig};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_kb() -> &'static KnowledgeBase {
    static KB: OnceLock<KnowledgeBase> = OnceLock::new();
    KB.get_or_init(|| match load_kb(&fixtures().join("kb")) {
        Ok(kb) => kb,
        Err(e) => panic!("fixture kb: {:?}", e.diagnostics()),
    })
}

pub fn fixture_pipeline() -> PipelineConfig {
    PipelineConfig::load(&fixtures().join("pipeline.toml")).expect("fixture pipeline")
}

/// Key order is a rendering detail; compare structures with keys sorted at
/// every level.
pub fn canonical(av: &AttrValue) -> serde_json::Value {
    fn value(v: &Value) -> serde_json::Value {
        match v {
            Value::Int(i) => (*i).into(),
            Value::Str(s) => s.as_str().into(),
            Value::Av(a) => canonical(a),
            Value::List(l) => serde_json::Value::Array(l.iter().map(value).collect()),
        }
    }
    let mut keys: Vec<(&str, &Value)> = av.iter().collect();
    keys.sort_by_key(|(k, _)| *k);
    let map: serde_json::Map<String, serde_json::Value> = keys.into_iter().map(|(k, v)| (k.to_string(), value(v))).collect();
    serde_json::Value::Object(map)
}
