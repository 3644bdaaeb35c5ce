//! Part-of-speech disambiguation: capitalization cues followed by
//! context filter rules learned from unannotated text.

mod learn;
mod rules;

use std::collections::BTreeSet;

use crate::morphology::{Morphology, Pos, Reading};
use crate::scanner::{Token, TokenKind};

pub use learn::{learn_filter_rules, learn_from_tagged};
pub use rules::{apply_filter_rules, load_rules, parse_rules, render_rules, Direction, FilterRule, RuleError, RuleTest};

/// Tags assigned to a word with no lexicon reading.
pub const UNKNOWN_TAGS: [Pos; 3] = [Pos::N, Pos::V, Pos::Adj];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub token: Token,
    pub readings: BTreeSet<Reading>,
    /// Remaining candidate tags. Empty for non-word tokens.
    pub tags: BTreeSet<Pos>,
}

impl TaggedToken {
    pub fn new(token: Token, readings: BTreeSet<Reading>) -> Self {
        let tags = if !token.is_word() {
            BTreeSet::new()
        } else if readings.is_empty() {
            UNKNOWN_TAGS.into_iter().collect()
        } else {
            readings.iter().map(|r| r.pos).collect()
        };
        TaggedToken { token, readings, tags }
    }

    /// The single remaining tag, if disambiguated.
    pub fn chosen(&self) -> Option<Pos> {
        (self.tags.len() == 1).then(|| *self.tags.iter().next().unwrap())
    }

    pub fn is_ambiguous(&self) -> bool {
        self.tags.len() > 1
    }

    pub fn is_unknown(&self) -> bool {
        self.token.is_word() && self.readings.is_empty()
    }

    /// Narrows to `keep`; readings follow the tag set.
    pub(crate) fn restrict(&mut self, keep: &BTreeSet<Pos>) {
        self.tags = self.tags.intersection(keep).copied().collect();
        if !self.readings.is_empty() {
            self.readings.retain(|r| keep.contains(&r.pos));
        }
    }
}

/// Analyzes every word token.
pub fn tag_tokens(tokens: &[Token], morph: &Morphology) -> Vec<TaggedToken> {
    tokens
        .iter()
        .map(|t| {
            let readings = if t.is_word() { morph.analyze(&t.surface) } else { BTreeSet::new() };
            TaggedToken::new(t.clone(), readings)
        })
        .collect()
}

pub fn is_sentence_boundary(token: &Token) -> bool {
    token.kind == TokenKind::ParagraphBreak
        || (token.kind == TokenKind::Punct && matches!(token.surface.as_str(), "." | "!" | "?"))
}

/// Splits a token sequence after each sentence boundary.
pub fn sentences(tokens: &[Token]) -> Vec<Vec<Token>> {
    let mut out = vec![Vec::new()];
    for t in tokens {
        out.last_mut().unwrap().push(t.clone());
        if is_sentence_boundary(t) {
            out.push(Vec::new());
        }
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Capitalization cues. Capitalized words that do not start a sentence keep
/// only noun and name readings; lowercase words lose them when other
/// readings exist.
pub fn apply_case_rules(mut sentence: Vec<TaggedToken>) -> Vec<TaggedToken> {
    let nominal: BTreeSet<Pos> = [Pos::N, Pos::Name].into_iter().collect();
    let mut initial = true;
    for t in sentence.iter_mut() {
        if is_sentence_boundary(&t.token) {
            initial = true;
            continue;
        }
        if !t.token.is_word() {
            continue;
        }
        let was_initial = std::mem::replace(&mut initial, false);
        if !t.is_ambiguous() {
            continue;
        }
        let capitalized = t.token.surface.chars().next().is_some_and(char::is_uppercase);
        if capitalized {
            if was_initial {
                continue;
            }
            if t.is_unknown() {
                t.tags = [Pos::N].into_iter().collect();
            } else if t.tags.iter().any(|p| nominal.contains(p)) {
                t.restrict(&nominal);
            }
        } else if !t.is_unknown()
            && t.tags.iter().any(|p| !nominal.contains(p)) && t.tags.iter().any(|p| nominal.contains(p)) {
            let rest: BTreeSet<Pos> = t.tags.difference(&nominal).copied().collect();
            t.restrict(&rest);
        }
    }
    sentence
}

/// Analyzes, applies the case cues and then `rules`, one sentence at a time.
pub fn tag_document(tokens: &[Token], morph: &Morphology, rules: &[FilterRule]) -> Vec<TaggedToken> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut sentence = Vec::new();
    for t in tag_tokens(tokens, morph) {
        let end = is_sentence_boundary(&t.token);
        sentence.push(t);
        if end {
            out.extend(apply_filter_rules(apply_case_rules(std::mem::take(&mut sentence)), rules));
        }
    }
    out.extend(apply_filter_rules(apply_case_rules(sentence), rules));
    out
}
