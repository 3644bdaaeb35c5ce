//! Lexicon lookup and word-form analysis.
//!
//! Stems live in a character trie. A simplex reading pairs a stored stem
//! with an ending from the entry's inflection class; compound readings are
//! produced by recursive trie traversal over stems and linking elements,
//! with the last segment deciding part of speech and inflection.

mod compound;
mod lexicon;
mod trie;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::feature::FeatureStructure;

pub use compound::{decompose, CompoundLimits, Decomposition, LinkRule};
pub use lexicon::{
    load_inflection, load_lexicon, parse_inflection, parse_lexicon, parse_lexicon_entries, InflectionTable,
};
pub use trie::LexiconTrie;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// The closed tag inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    N,
    V,
    Adj,
    Det,
    Prep,
    Adv,
    Partikel,
    Pron,
    Conj,
    Name,
}

impl Pos {
    pub const ALL: [Pos; 10] = [
        Pos::N,
        Pos::V,
        Pos::Adj,
        Pos::Det,
        Pos::Prep,
        Pos::Adv,
        Pos::Partikel,
        Pos::Pron,
        Pos::Conj,
        Pos::Name,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::N => "n",
            Pos::V => "v",
            Pos::Adj => "adj",
            Pos::Det => "det",
            Pos::Prep => "prep",
            Pos::Adv => "adv",
            Pos::Partikel => "partikel",
            Pos::Pron => "pron",
            Pos::Conj => "conj",
            Pos::Name => "name",
        }
    }

    pub fn parse(s: &str) -> Option<Pos> {
        let s = s.trim().to_ascii_lowercase();
        Pos::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One lexicon entry as stored at a trie terminal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexEntry {
    pub stem: String,
    pub pos: Pos,
    pub class: String,
    pub lattice_type: String,
    /// Combination patterns anchored on this entry.
    pub fcps: Vec<String>,
    /// Citation form when it differs from the stem.
    pub lemma: Option<String>,
    /// Separable verb prefix belonging to this lexeme.
    pub sep_prefix: Option<String>,
}

impl LexEntry {
    pub fn new(stem: &str, pos: Pos, class: &str, lattice_type: &str) -> Self {
        LexEntry {
            stem: stem.to_string(),
            pos,
            class: class.to_string(),
            lattice_type: lattice_type.to_string(),
            fcps: Vec::new(),
            lemma: None,
            sep_prefix: None,
        }
    }

    pub fn lemma(&self) -> &str {
        self.lemma.as_deref().unwrap_or(&self.stem)
    }
}

/// A morphological reading: stem(s), inflection bundle and part of speech,
/// plus the head entry's lexical data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Reading {
    pub stems: Vec<String>,
    pub inflection: FeatureStructure,
    pub pos: Pos,
    pub lexical_type: String,
    pub lemma: String,
    pub fcps: Vec<String>,
    pub sep_prefix: Option<String>,
}

impl Reading {
    pub fn is_compound(&self) -> bool {
        self.stems.len() > 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphConfig {
    pub compounds: bool,
    pub limits: CompoundLimits,
}

impl Default for MorphConfig {
    fn default() -> Self {
        MorphConfig {
            compounds: true,
            limits: CompoundLimits::default(),
        }
    }
}

/// Lexicon, inflection classes and linking rules bundled for analysis.
#[derive(Debug, Clone)]
pub struct Morphology {
    pub trie: LexiconTrie,
    pub inflection: InflectionTable,
    pub links: Vec<LinkRule>,
    pub config: MorphConfig,
    endings: BTreeSet<String>,
}

impl Morphology {
    pub fn new(trie: LexiconTrie, inflection: InflectionTable, links: Vec<LinkRule>) -> Self {
        let endings = inflection
            .values()
            .flatten()
            .map(|(e, _)| e.clone())
            .chain(std::iter::once(String::new()))
            .collect();
        Morphology {
            trie,
            inflection,
            links,
            config: MorphConfig::default(),
            endings,
        }
    }

    pub fn with_config(mut self, config: MorphConfig) -> Self {
        self.config = config;
        self
    }

    /// Feature bundles for `ending` under `class`. An unknown class only
    /// admits the empty ending, with no features.
    fn endings_for<'a>(&'a self, class: &str, ending: &'a str) -> Vec<&'a FeatureStructure> {
        static EMPTY: std::sync::OnceLock<FeatureStructure> = std::sync::OnceLock::new();
        match self.inflection.get(class) {
            Some(rows) => rows.iter().filter(|(e, _)| e == ending).map(|(_, fs)| fs).collect(),
            None if ending.is_empty() => vec![EMPTY.get_or_init(FeatureStructure::new)],
            None => Vec::new(),
        }
    }

    pub fn decompose(&self, word: &str) -> BTreeSet<Decomposition> {
        decompose(word, &self.trie, &self.links, self.config.limits)
    }

    /// All readings of `word`; empty iff the word is unknown.
    pub fn analyze(&self, word: &str) -> BTreeSet<Reading> {
        let word = word.to_lowercase();
        let mut out = BTreeSet::new();
        if word.is_empty() {
            return out;
        }
        self.simplex(&word, &mut out);
        if word.contains('-') {
            self.hyphenated(&word, &mut out);
        } else if self.config.compounds {
            self.compounds(&word, &mut out);
        }
        out
    }

    fn simplex(&self, word: &str, out: &mut BTreeSet<Reading>) {
        let chars: Vec<char> = word.chars().collect();
        for (end, entries) in self.trie.prefixes(&chars, 0) {
            let ending: String = chars[end..].iter().collect();
            if !self.endings.contains(&ending) {
                continue;
            }
            for entry in entries {
                for fs in self.endings_for(&entry.class, &ending) {
                    out.insert(reading(vec![entry.stem.clone()], entry, fs, entry.lemma().to_string()));
                }
            }
        }
    }

    fn compounds(&self, word: &str, out: &mut BTreeSet<Reading>) {
        for ending in &self.endings {
            let Some(base) = word.strip_suffix(ending.as_str()) else {
                continue;
            };
            for d in self.decompose(base) {
                let Some(entries) = self.trie.lookup(d.head()) else {
                    continue;
                };
                let prefix: String = d.surface()[..base.len() - d.head().len()].to_string();
                for entry in entries {
                    for fs in self.endings_for(&entry.class, ending) {
                        let lemma = format!("{prefix}{}", entry.lemma());
                        out.insert(reading(d.segments.clone(), entry, fs, lemma));
                    }
                }
            }
        }
    }

    /// Each hyphen-separated part is analyzed on its own; the last part
    /// decides the reading, earlier parts contribute their stems.
    fn hyphenated(&self, word: &str, out: &mut BTreeSet<Reading>) {
        let parts: Vec<&str> = word.split('-').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return;
        }
        let mut leading = Vec::new();
        for part in &parts[..parts.len() - 1] {
            match self.analyze(part).into_iter().next() {
                Some(r) => leading.extend(r.stems),
                None => return,
            }
        }
        let lead_surface = parts[..parts.len() - 1].join("-");
        for last in self.analyze(parts[parts.len() - 1]) {
            let mut r = last.clone();
            r.stems = leading.iter().cloned().chain(last.stems).collect();
            r.lemma = format!("{lead_surface}-{}", last.lemma);
            out.insert(r);
        }
    }
}

fn reading(stems: Vec<String>, entry: &LexEntry, fs: &FeatureStructure, lemma: String) -> Reading {
    Reading {
        stems,
        inflection: fs.clone(),
        pos: entry.pos,
        lexical_type: entry.lattice_type.clone(),
        lemma,
        fcps: entry.fcps.clone(),
        sep_prefix: entry.sep_prefix.clone(),
    }
}

/// ASCII transliteration of German umlauts and sharp s.
pub fn transliterate(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'ä' => out.push_str("ae"),
            'ö' => out.push_str("oe"),
            'ü' => out.push_str("ue"),
            'Ä' => out.push_str("Ae"),
            'Ö' => out.push_str("Oe"),
            'Ü' => out.push_str("Ue"),
            'ß' => out.push_str("ss"),
            c => out.push(c),
        }
    }
    out
}
