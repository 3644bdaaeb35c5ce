//! Synthetic tagged corpus drawn from a fixed tag-bigram grammar.

use std::collections::{BTreeMap, BTreeSet};

use ie_core::morphology::Pos;
use ie_core::scanner::{Token, TokenKind};
use ie_core::tagger::{TaggedToken, UNKNOWN_TAGS};
use rand::seq::SliceRandom;
use rand::Rng;

/// One generated sentence: tokens with candidate tags, and the gold tags.
pub struct Sentence {
    pub tokens: Vec<TaggedToken>,
    pub gold: Vec<Pos>,
}

const CLOSED: [Pos; 5] = [Pos::Det, Pos::Prep, Pos::Conj, Pos::Adv, Pos::Pron];
const OPEN: [Pos; 3] = [Pos::N, Pos::V, Pos::Adj];

/// Successor distribution per tag; `None` is the sentence boundary.
fn transitions(prev: Option<Pos>) -> &'static [(Option<Pos>, u32)] {
    use Pos::*;
    match prev {
        None => &[(Some(Det), 6), (Some(Pron), 3), (Some(Adv), 1)],
        Some(Det) => &[(Some(Adj), 3), (Some(N), 7)],
        Some(Adj) => &[(Some(N), 8), (Some(Adj), 2)],
        Some(N) => &[(Some(V), 5), (Some(Prep), 2), (Some(Conj), 1), (None, 2)],
        Some(V) => &[(Some(Det), 5), (Some(Adv), 3), (Some(Prep), 1), (None, 1)],
        Some(Prep) => &[(Some(Det), 8), (Some(N), 2)],
        Some(Adv) => &[(Some(V), 4), (Some(Adj), 3), (Some(Prep), 3)],
        Some(Conj) => &[(Some(Det), 7), (Some(Pron), 3)],
        Some(Pron) => &[(Some(V), 9), (None, 1)],
        Some(_) => &[(None, 1)],
    }
}

fn draw<R: Rng>(rng: &mut R, dist: &[(Option<Pos>, u32)]) -> Option<Pos> {
    let total: u32 = dist.iter().map(|(_, w)| w).sum();
    let mut x = rng.gen_range(0..total);
    for (t, w) in dist {
        if x < *w {
            return *t;
        }
        x -= w;
    }
    unreachable!()
}

/// Vocabulary: unambiguous words per tag plus ambiguous words, each with
/// its candidate tag set.
pub struct Vocabulary {
    plain: BTreeMap<Pos, Vec<String>>,
    ambiguous: BTreeMap<Pos, Vec<(String, BTreeSet<Pos>)>>,
}

/// Ambiguity classes of the synthetic language.
const CLASSES: [&[Pos]; 5] = [
    &[Pos::N, Pos::V],
    &[Pos::Adj, Pos::Adv],
    &[Pos::Det, Pos::Pron],
    &[Pos::Prep, Pos::Adv],
    &[Pos::V, Pos::Adj],
];

impl Vocabulary {
    pub fn new() -> Self {
        let mut plain = BTreeMap::new();
        for p in CLOSED.iter().chain(OPEN.iter()) {
            let words = (0..25).map(|i| format!("{}w{i}", p.as_str())).collect();
            plain.insert(*p, words);
        }
        let mut ambiguous: BTreeMap<Pos, Vec<(String, BTreeSet<Pos>)>> = BTreeMap::new();
        for (c, class) in CLASSES.iter().enumerate() {
            for i in 0..6 {
                let word = format!("amb{c}x{i}");
                let tags: BTreeSet<Pos> = class.iter().copied().collect();
                for p in *class {
                    ambiguous.entry(*p).or_default().push((word.clone(), tags.clone()));
                }
            }
        }
        Vocabulary { plain, ambiguous }
    }
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new()
    }
}

fn token(surface: &str, tags: BTreeSet<Pos>) -> TaggedToken {
    let tok = Token::new(surface, TokenKind::Word, 0, surface.chars().count());
    let mut t = TaggedToken::new(tok, BTreeSet::new());
    t.tags = tags;
    t
}

/// Draws sentences until at least `min_tokens` tokens exist, then
/// realises them so that about `unknown` of all tokens are out-of-vocabulary
/// (open-class gold tags only) and about `ambiguous` come from ambiguity
/// classes.
pub fn generate<R: Rng>(rng: &mut R, vocab: &Vocabulary, min_tokens: usize, ambiguous: f64, unknown: f64) -> Vec<Sentence> {
    let mut golds: Vec<Vec<Pos>> = Vec::new();
    let mut count = 0;
    while count < min_tokens {
        let mut gold = Vec::new();
        let mut prev = None;
        while let Some(tag) = draw(rng, transitions(prev)) {
            gold.push(tag);
            prev = Some(tag);
            if gold.len() >= 30 {
                break;
            }
        }
        count += gold.len();
        golds.push(gold);
    }
    let all = golds.iter().flatten();
    let open = all.clone().filter(|t| OPEN.contains(t)).count();
    let eligible = all.filter(|t| vocab.ambiguous.contains_key(t)).count();
    let p_unknown = (unknown * count as f64 / open as f64).min(1.0);
    let p_ambiguous = (ambiguous * count as f64 / (eligible as f64 - unknown * count as f64)).min(1.0);
    let mut fresh = 0usize;
    golds
        .into_iter()
        .map(|gold| {
            let tokens = gold
                .iter()
                .map(|tag| {
                    let (surface, tags) = if OPEN.contains(tag) && rng.gen_bool(p_unknown) {
                        fresh += 1;
                        (format!("unk{fresh}"), UNKNOWN_TAGS.into_iter().collect())
                    } else if vocab.ambiguous.contains_key(tag) && rng.gen_bool(p_ambiguous) {
                        vocab.ambiguous[tag].choose(rng).unwrap().clone()
                    } else {
                        (vocab.plain[tag].choose(rng).unwrap().clone(), [*tag].into())
                    };
                    token(&surface, tags)
                })
                .collect();
            Sentence { tokens, gold }
        })
        .collect()
}
