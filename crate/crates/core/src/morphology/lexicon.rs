use std::collections::BTreeMap;
use std::path::Path;

use crate::feature::FeatureStructure;

use super::{LexEntry, LexiconTrie, MorphError, Pos};

/// Inflection class name to its `(ending, features)` rows.
pub type InflectionTable = BTreeMap<String, Vec<(String, FeatureStructure)>>;

fn read(path: &Path) -> Result<String, MorphError> {
    std::fs::read_to_string(path).map_err(|e| MorphError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

/// Parses lexicon lines `stem pos class type [fcps [attrs]]` (tab separated).
/// `fcps` is a comma list or `-`; `attrs` is `lemma=..,sep=..`.
pub fn parse_lexicon_entries(src: &str, path: &str) -> Result<Vec<(usize, LexEntry)>, MorphError> {
    let mut out = Vec::new();
    for (line, text) in data_lines(src) {
        let err = |message: String| MorphError::Parse {
            path: path.to_string(),
            line,
            message,
        };
        let cols: Vec<&str> = text.split('\t').map(str::trim).collect();
        if cols.len() < 4 || cols.len() > 6 {
            return Err(err(format!("expected 4 to 6 tab-separated columns, found {}", cols.len())));
        }
        if cols[0].is_empty() {
            return Err(err("empty stem".into()));
        }
        let pos = Pos::parse(cols[1]).ok_or_else(|| err(format!("unknown part of speech `{}`", cols[1])))?;
        if cols[2].is_empty() || cols[3].is_empty() {
            return Err(err("empty inflection class or lattice type".into()));
        }
        let mut entry = LexEntry::new(cols[0], pos, cols[2], cols[3]);
        if let Some(fcps) = cols.get(4).filter(|c| !c.is_empty() && **c != "-") {
            entry.fcps = fcps.split(',').map(|s| s.trim().to_string()).collect();
        }
        if let Some(attrs) = cols.get(5) {
            for kv in attrs.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match kv.split_once('=') {
                    Some(("lemma", v)) if !v.is_empty() => entry.lemma = Some(v.to_string()),
                    Some(("sep", v)) if !v.is_empty() => entry.sep_prefix = Some(v.to_string()),
                    _ => return Err(err(format!("bad attribute `{kv}`"))),
                }
            }
        }
        out.push((line, entry));
    }
    Ok(out)
}

pub fn parse_lexicon(src: &str, path: &str) -> Result<LexiconTrie, MorphError> {
    let mut trie = LexiconTrie::new();
    for (_, e) in parse_lexicon_entries(src, path)? {
        trie.insert(e);
    }
    Ok(trie)
}

pub fn load_lexicon(path: &Path) -> Result<LexiconTrie, MorphError> {
    parse_lexicon(&read(path)?, &path.display().to_string())
}

/// Parses `class<TAB>ending<TAB>features` lines; ending `0` is the empty ending.
pub fn parse_inflection(src: &str, path: &str) -> Result<InflectionTable, MorphError> {
    let mut table = InflectionTable::new();
    for (line, text) in data_lines(src) {
        let err = |message: String| MorphError::Parse {
            path: path.to_string(),
            line,
            message,
        };
        let cols: Vec<&str> = text.split('\t').map(str::trim).collect();
        if cols.len() < 2 || cols.len() > 3 || cols[0].is_empty() || cols[1].is_empty() {
            return Err(err("expected `class<TAB>ending<TAB>features`".into()));
        }
        let ending = if cols[1] == "0" { String::new() } else { cols[1].to_lowercase() };
        let fs = FeatureStructure::parse(cols.get(2).copied().unwrap_or(""))
            .map_err(|e| err(e.to_string()))?;
        table.entry(cols[0].to_string()).or_default().push((ending, fs));
    }
    Ok(table)
}

pub fn load_inflection(path: &Path) -> Result<InflectionTable, MorphError> {
    parse_inflection(&read(path)?, &path.display().to_string())
}
