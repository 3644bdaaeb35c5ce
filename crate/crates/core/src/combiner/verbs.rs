use std::collections::BTreeMap;

use crate::morphology::Reading;

use super::{Anchor, Entry, EntryKind, ItemStream};

pub const AUX_TYPE: &str = "aux-verb";
pub const MODAL_TYPE: &str = "modal-verb";

const PASSIVE_AUX: &str = "werden";

fn is_aux(r: &Reading) -> bool {
    r.lexical_type == AUX_TYPE || r.lexical_type == MODAL_TYPE
}

fn is_participle(r: &Reading) -> bool {
    r.inflection.get("form").is_some_and(|f| f.contains("part"))
}

/// All verb forms of one clause: a head verb plus folded auxiliaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbGroup {
    pub head: Reading,
    pub head_token: usize,
    pub aux: Vec<Reading>,
    pub separated_prefix: Option<String>,
    pub passive: bool,
    pub span: (usize, usize),
}

impl VerbGroup {
    pub fn lexeme(&self) -> &str {
        &self.head.lemma
    }
}

/// Groups the verbs of a clause segment. The head is the last verb with a
/// main-verb reading; every other verb counts as auxiliary. A particle in
/// the segment selects a head reading with that separable prefix.
pub fn recognize_verb_group(segment: &[Entry]) -> Option<VerbGroup> {
    let verbs: Vec<(usize, &Vec<Reading>)> = segment
        .iter()
        .filter_map(|e| match &e.kind {
            EntryKind::Verb { token, readings } if !readings.is_empty() => Some((*token, readings)),
            _ => None,
        })
        .collect();
    let particles: Vec<&str> = segment
        .iter()
        .filter_map(|e| match &e.kind {
            EntryKind::Particle(p) => Some(p.as_str()),
            _ => None,
        })
        .collect();
    let head_at = verbs
        .iter()
        .rposition(|(_, rs)| rs.iter().any(|r| !is_aux(r)))
        .unwrap_or(verbs.len().checked_sub(1)?);
    let (head_token, readings) = verbs[head_at];
    let mains: Vec<&Reading> = {
        let m: Vec<&Reading> = readings.iter().filter(|r| !is_aux(r)).collect();
        if m.is_empty() {
            readings.iter().collect()
        } else {
            m
        }
    };
    let with_prefix = mains
        .iter()
        .find(|r| r.sep_prefix.as_deref().is_some_and(|p| particles.contains(&p)));
    let aux: Vec<Reading> = verbs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != head_at)
        .map(|(_, (_, rs))| rs.iter().find(|r| is_aux(r)).unwrap_or(&rs[0]).clone())
        .collect();
    let werden = aux.iter().any(|r| r.lemma == PASSIVE_AUX);
    let plain = |r: &&&Reading| r.sep_prefix.is_none();
    let head = match with_prefix {
        Some(r) => *r,
        None => mains
            .iter()
            .filter(plain)
            .find(|r| werden && is_participle(r))
            .or_else(|| mains.iter().find(plain))
            .copied()
            .unwrap_or(mains[0]),
    };
    let passive = werden && is_participle(head);
    let tokens = verbs.iter().map(|(t, _)| *t);
    let span = (tokens.clone().min()?, tokens.max()? + 1);
    Some(VerbGroup {
        head: head.clone(),
        head_token,
        aux,
        separated_prefix: with_prefix.and_then(|r| r.sep_prefix.clone()),
        passive,
        span,
    })
}

fn is_clause_end(e: &Entry) -> bool {
    match &e.kind {
        EntryKind::Punct(p) => matches!(p.as_str(), "." | "!" | "?" | ";"),
        EntryKind::Text(_) => true,
        _ => false,
    }
}

/// Folds each clause's verbs, particles and conjunctions into one anchor
/// entry keyed by the head lexeme. Afterwards only fragments, punctuation,
/// text tokens and anchors remain. `extra` maps lexemes to FCP names that
/// attach to them besides the lexicon's own attachments.
pub fn apply_lexical_rules(stream: ItemStream, extra: &BTreeMap<String, Vec<String>>) -> ItemStream {
    let entries = stream.into_entries();
    let mut out = Vec::new();
    let mut segment: Vec<Entry> = Vec::new();
    let flush = |segment: &mut Vec<Entry>, out: &mut Vec<Entry>| {
        if let Some(g) = recognize_verb_group(segment) {
            let mut fcps = g.head.fcps.clone();
            for f in extra.get(g.lexeme()).into_iter().flatten() {
                if !fcps.contains(f) {
                    fcps.push(f.clone());
                }
            }
            let anchor = Anchor {
                lexeme: g.lexeme().to_string(),
                fcps,
                token: g.head_token,
                aux: g.aux.iter().map(|r| r.lemma.clone()).collect(),
                passive: g.passive,
            };
            out.push(Entry::new(EntryKind::Anchor(anchor), g.head_token, g.head_token + 1));
        }
        out.extend(segment.drain(..).filter(|e| {
            matches!(e.kind, EntryKind::Fragment(_) | EntryKind::Punct(_) | EntryKind::Text(_) | EntryKind::Anchor(_))
        }));
    };
    for e in entries {
        if is_clause_end(&e) {
            flush(&mut segment, &mut out);
            out.push(e);
        } else if matches!(e.kind, EntryKind::Conj(_)) {
            flush(&mut segment, &mut out);
        } else {
            segment.push(e);
        }
    }
    flush(&mut segment, &mut out);
    ItemStream::from_entries(out)
}
