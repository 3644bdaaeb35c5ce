use serde::{Deserialize, Serialize};

use crate::avs::AttrValue;

/// Uniform component output: a typed span with an attribute-value payload.
/// Positions are token indices, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TextItem {
    #[serde(rename = "type")]
    pub ty: String,
    pub start: usize,
    pub end: usize,
    pub out: AttrValue,
}

impl TextItem {
    pub fn new(ty: impl Into<String>, start: usize, end: usize, out: AttrValue) -> Self {
        TextItem {
            ty: normalize_type(&ty.into()),
            start,
            end,
            out,
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// `{type, start, end, out}` as an attribute-value structure.
    pub fn to_av(&self) -> AttrValue {
        AttrValue::new()
            .with("type", self.ty.clone())
            .with("start", self.start as i64)
            .with("end", self.end as i64)
            .with("out", self.out.clone())
    }
}

/// Type symbols are compared without a leading colon and case-insensitively.
pub fn normalize_type(s: &str) -> String {
    s.trim().trim_start_matches(':').to_lowercase()
}
