//! Exhaustive compound splitter over a hash-map lexicon.

use std::collections::{BTreeSet, HashMap};

use ie_core::morphology::Pos;

pub struct Linker {
    pub text: String,
    /// `None` admits any left part of speech.
    pub left: Option<BTreeSet<Pos>>,
}

pub struct Splitter {
    pub stems: HashMap<String, BTreeSet<Pos>>,
    pub linkers: Vec<Linker>,
    pub min_segment: usize,
    pub max_segments: usize,
}

pub type Split = (Vec<String>, Vec<String>);

impl Splitter {
    fn linkers_after(&self, stem: &str) -> BTreeSet<&str> {
        let pos = &self.stems[stem];
        self.linkers
            .iter()
            .filter(|l| l.left.as_ref().is_none_or(|ok| !ok.is_disjoint(pos)))
            .map(|l| l.text.as_str())
            .collect()
    }

    /// Every way to write `word` as stem (linker stem)+ with at least two
    /// stems, trying every cut point.
    pub fn split(&self, word: &str) -> BTreeSet<Split> {
        let chars: Vec<char> = word.to_lowercase().chars().collect();
        let mut out = BTreeSet::new();
        self.rec(&chars, 0, &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    fn rec(&self, chars: &[char], at: usize, segs: &mut Vec<String>, links: &mut Vec<String>, out: &mut BTreeSet<Split>) {
        for end in at + 1..=chars.len() {
            let piece: String = chars[at..end].iter().collect();
            if piece.chars().count() < self.min_segment || !self.stems.contains_key(&piece) {
                continue;
            }
            segs.push(piece.clone());
            if end == chars.len() {
                if segs.len() >= 2 && segs.len() <= self.max_segments {
                    out.insert((segs.clone(), links.clone()));
                }
            } else if segs.len() < self.max_segments {
                for l in self.linkers_after(&piece) {
                    let lc: Vec<char> = l.chars().collect();
                    let next = end + lc.len();
                    if next < chars.len() && chars[end..next] == lc[..] {
                        links.push(l.to_string());
                        self.rec(chars, next, segs, links, out);
                        links.pop();
                    }
                }
            }
            segs.pop();
        }
    }
}
