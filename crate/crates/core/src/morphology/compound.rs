use std::collections::BTreeSet;

use super::{LexEntry, LexiconTrie, MorphError, Pos};

/// A linking element admissible between two compound segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkRule {
    pub linker: String,
    /// Empty means any part of speech.
    pub left_pos: BTreeSet<Pos>,
}

impl LinkRule {
    pub fn new(linker: &str, left_pos: &[Pos]) -> Self {
        LinkRule {
            linker: linker.to_string(),
            left_pos: left_pos.iter().copied().collect(),
        }
    }

    pub fn admits(&self, left: &[LexEntry]) -> bool {
        self.left_pos.is_empty() || left.iter().any(|e| self.left_pos.contains(&e.pos))
    }

    /// The German linking elements: "", s, es, n, en, e, er and the hyphen.
    pub fn german_defaults() -> Vec<LinkRule> {
        use Pos::*;
        vec![
            LinkRule::new("", &[N, V, Adj, Name]),
            LinkRule::new("s", &[N]),
            LinkRule::new("es", &[N]),
            LinkRule::new("n", &[N]),
            LinkRule::new("en", &[N]),
            LinkRule::new("e", &[N, V]),
            LinkRule::new("er", &[N]),
            LinkRule::new("-", &[]),
        ]
    }

    /// Parses `linker<TAB>pos,pos` lines; `0` denotes the empty linker and
    /// an absent or `*` position list admits any part of speech.
    pub fn parse(src: &str, path: &str) -> Result<Vec<LinkRule>, MorphError> {
        let mut rules = Vec::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| MorphError::Parse {
                path: path.to_string(),
                line: n + 1,
                message,
            };
            let mut cols = line.split('\t');
            let linker = cols.next().unwrap_or_default().trim();
            let linker = if linker == "0" { "" } else { linker };
            if linker.chars().count() > 2 && linker != "-" {
                return Err(err(format!("linker `{linker}` longer than two characters")));
            }
            let mut left_pos = BTreeSet::new();
            if let Some(list) = cols.next().map(str::trim).filter(|l| !l.is_empty() && *l != "*") {
                for p in list.split(',') {
                    left_pos.insert(Pos::parse(p.trim()).ok_or_else(|| err(format!("unknown pos `{p}`")))?);
                }
            }
            rules.push(LinkRule {
                linker: linker.to_string(),
                left_pos,
            });
        }
        Ok(rules)
    }
}

/// One segmentation: `segments[i]` is followed by `linkers[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    pub segments: Vec<String>,
    pub linkers: Vec<String>,
}

impl Decomposition {
    pub fn head(&self) -> &str {
        self.segments.last().expect("at least two segments")
    }

    pub fn surface(&self) -> String {
        let mut s = String::new();
        for (i, seg) in self.segments.iter().enumerate() {
            s.push_str(seg);
            if let Some(l) = self.linkers.get(i) {
                s.push_str(l);
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompoundLimits {
    pub min_segment: usize,
    pub max_segments: usize,
}

impl Default for CompoundLimits {
    fn default() -> Self {
        CompoundLimits {
            min_segment: 3,
            max_segments: 4,
        }
    }
}

struct Walk<'a> {
    trie: &'a LexiconTrie,
    rules: &'a [LinkRule],
    limits: CompoundLimits,
    chars: &'a [char],
    out: BTreeSet<Decomposition>,
    segments: Vec<(usize, usize)>,
    linkers: Vec<&'a str>,
}

impl Walk<'_> {
    fn descend(&mut self, start: usize) {
        if self.segments.len() >= self.limits.max_segments {
            return;
        }
        let n = self.chars.len();
        let trie = self.trie;
        let chars = self.chars;
        for (end, entries) in trie.prefixes(chars, start) {
            if end - start < self.limits.min_segment {
                continue;
            }
            if end == n {
                if !self.segments.is_empty() {
                    self.emit(start, end);
                }
                continue;
            }
            for rule in self.rules {
                let link: Vec<char> = rule.linker.chars().collect();
                let next = end + link.len();
                if next >= n || chars[end..next] != link[..] || !rule.admits(entries) {
                    continue;
                }
                self.segments.push((start, end));
                self.linkers.push(&rule.linker);
                self.descend(next);
                self.segments.pop();
                self.linkers.pop();
            }
        }
    }

    fn emit(&mut self, start: usize, end: usize) {
        let text = |(a, b): (usize, usize)| self.chars[a..b].iter().collect::<String>();
        let mut segments: Vec<String> = self.segments.iter().map(|&s| text(s)).collect();
        segments.push(text((start, end)));
        self.out.insert(Decomposition {
            segments,
            linkers: self.linkers.iter().map(|l| l.to_string()).collect(),
        });
    }
}

/// All segmentations of `word` into two or more lexicon stems joined by
/// admissible linkers. A simplex word yields the empty set.
pub fn decompose(
    word: &str,
    trie: &LexiconTrie,
    rules: &[LinkRule],
    limits: CompoundLimits,
) -> BTreeSet<Decomposition> {
    let chars: Vec<char> = word.to_lowercase().chars().collect();
    let mut walk = Walk {
        trie,
        rules,
        limits,
        chars: &chars,
        out: BTreeSet::new(),
        segments: Vec::new(),
        linkers: Vec::new(),
    };
    walk.descend(0);
    walk.out
}
