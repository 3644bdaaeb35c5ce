//! Bidirectional, lexically anchored combination of fragments into
//! templates.
//!
//! The item stream holds fragments, punctuation, text-structure tokens and
//! anchors in text order. Each anchor splits it into a left and a right
//! part; the anchor's combination patterns walk both parts outward from the
//! anchor, filling constraint slots until a stop marker is reached.

mod apply;
mod fcp;
mod verbs;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::item::TextItem;
use crate::morphology::{Pos, Reading};
use crate::scanner::TokenKind;
use crate::tagger::TaggedToken;

pub use apply::{apply_fcp, combine, view, Score, Side, Template, TemplateAnchor};
pub use fcp::{parse_fcp_file, ConstraintEntry, ConstraintSet, Fcp, FcpError, DEFAULT_STOP_MARKERS};
pub use verbs::{apply_lexical_rules, recognize_verb_group, VerbGroup, AUX_TYPE, MODAL_TYPE};

/// A lexical anchor, usually a verb group's head.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub lexeme: String,
    pub fcps: Vec<String>,
    /// Token index of the head verb.
    pub token: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub passive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryKind {
    Fragment(TextItem),
    Punct(String),
    /// Text-structure token such as a paragraph break.
    Text(String),
    Anchor(Anchor),
    /// A verb token awaiting the lexical rules.
    Verb { token: usize, readings: Vec<Reading> },
    /// A detached particle, possibly a separated verb prefix.
    Particle(String),
    /// A coordinating conjunction; splits verb groups.
    Conj(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub kind: EntryKind,
    pub start: usize,
    pub end: usize,
    pub prev: Option<usize>,
    pub next: Option<usize>,
}

impl Entry {
    pub fn new(kind: EntryKind, start: usize, end: usize) -> Self {
        Entry {
            kind,
            start,
            end,
            prev: None,
            next: None,
        }
    }

    pub fn as_fragment(&self) -> Option<&TextItem> {
        match &self.kind {
            EntryKind::Fragment(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_anchor(&self) -> Option<&Anchor> {
        match &self.kind {
            EntryKind::Anchor(a) => Some(a),
            _ => None,
        }
    }

    /// Surface used by stop markers and token tests: punctuation text or
    /// the text-token kind.
    pub fn marker(&self) -> Option<&str> {
        match &self.kind {
            EntryKind::Punct(s) | EntryKind::Text(s) => Some(s),
            _ => None,
        }
    }

    fn rank(&self) -> (usize, std::cmp::Reverse<usize>, u8) {
        let k = match self.kind {
            EntryKind::Fragment(_) => 0,
            EntryKind::Anchor(_) | EntryKind::Verb { .. } => 1,
            _ => 2,
        };
        (self.start, std::cmp::Reverse(self.end), k)
    }
}

/// Doubly linked, position-sorted stream of entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ItemStream {
    entries: Vec<Entry>,
}

impl ItemStream {
    /// Sorts by start (longer first on ties) and links neighbors.
    pub fn from_entries(mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| format!("{:?}", a.kind).cmp(&format!("{:?}", b.kind))));
        let n = entries.len();
        for (i, e) in entries.iter_mut().enumerate() {
            e.prev = i.checked_sub(1);
            e.next = (i + 1 < n).then_some(i + 1);
        }
        ItemStream { entries }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Option<&Entry> {
        self.entries.get(i)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_entries(self) -> Vec<Entry> {
        self.entries
    }

    pub fn anchors(&self) -> impl Iterator<Item = (usize, &Anchor)> {
        self.entries.iter().enumerate().filter_map(|(i, e)| e.as_anchor().map(|a| (i, a)))
    }
}

/// Builds the parser input from extracted fragments and the tagged tokens.
/// Tokens covered by a fragment, punctuation included, are left out; verbs, particles and
/// conjunctions are kept for the lexical rules.
pub fn build_item_stream(fragments: &[TextItem], tokens: &[TaggedToken]) -> ItemStream {
    let mut covered = BTreeSet::new();
    let mut entries = Vec::new();
    for f in fragments {
        covered.extend(f.start..f.end);
        entries.push(Entry::new(EntryKind::Fragment(f.clone()), f.start, f.end));
    }
    for (i, t) in tokens.iter().enumerate() {
        if covered.contains(&i) {
            continue;
        }
        let kind = match t.token.kind {
            TokenKind::Punct => Some(EntryKind::Punct(t.token.surface.clone())),
            TokenKind::ParagraphBreak => Some(EntryKind::Text("paragraph-break".into())),
            _ if t.tags.contains(&Pos::V) => Some(EntryKind::Verb {
                token: i,
                readings: t.readings.iter().filter(|r| r.pos == Pos::V).cloned().collect(),
            }),
            _ if t.tags.contains(&Pos::Partikel) => Some(EntryKind::Particle(t.token.surface.to_lowercase())),
            _ if t.chosen() == Some(Pos::Conj) => Some(EntryKind::Conj(t.token.surface.to_lowercase())),
            _ => None,
        };
        if let Some(k) = kind {
            entries.push(Entry::new(k, i, i + 1));
        }
    }
    ItemStream::from_entries(entries)
}
