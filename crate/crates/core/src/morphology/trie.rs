use super::LexEntry;

#[derive(Debug, Clone, Default)]
struct Node {
    /// Sorted by character.
    children: Vec<(char, u32)>,
    entries: Vec<LexEntry>,
}

/// Character-keyed trie; terminal nodes carry one or more lexicon entries.
#[derive(Debug, Clone)]
pub struct LexiconTrie {
    nodes: Vec<Node>,
    stems: usize,
}

impl Default for LexiconTrie {
    fn default() -> Self {
        LexiconTrie {
            nodes: vec![Node::default()],
            stems: 0,
        }
    }
}

impl LexiconTrie {
    pub fn new() -> Self {
        Self::default()
    }

    fn child(&self, node: u32, c: char) -> Option<u32> {
        let children = &self.nodes[node as usize].children;
        children
            .binary_search_by_key(&c, |&(k, _)| k)
            .ok()
            .map(|i| children[i].1)
    }

    /// Inserts `entry` under its (lowercased) stem. An identical entry is
    /// stored once; different entries for one stem share the path.
    pub fn insert(&mut self, mut entry: LexEntry) {
        entry.stem = entry.stem.to_lowercase();
        let mut node = 0u32;
        for c in entry.stem.chars() {
            node = match self.child(node, c) {
                Some(n) => n,
                None => {
                    let id = self.nodes.len() as u32;
                    self.nodes.push(Node::default());
                    let children = &mut self.nodes[node as usize].children;
                    let at = children.partition_point(|&(k, _)| k < c);
                    children.insert(at, (c, id));
                    id
                }
            };
        }
        let entries = &mut self.nodes[node as usize].entries;
        if entries.is_empty() {
            self.stems += 1;
        }
        if !entries.contains(&entry) {
            entries.push(entry);
        }
    }

    pub fn lookup(&self, stem: &str) -> Option<&[LexEntry]> {
        let mut node = 0u32;
        for c in stem.chars() {
            node = self.child(node, c)?;
        }
        let entries = &self.nodes[node as usize].entries;
        (!entries.is_empty()).then_some(entries.as_slice())
    }

    /// Every stored stem that is a prefix of `chars[start..]`, as
    /// `(end, entries)` in increasing `end` order.
    pub fn prefixes<'a>(&'a self, chars: &'a [char], start: usize) -> impl Iterator<Item = (usize, &'a [LexEntry])> + 'a {
        let mut node = Some(0u32);
        let mut pos = start;
        std::iter::from_fn(move || loop {
            let n = node?;
            if pos >= chars.len() {
                node = None;
                return None;
            }
            node = self.child(n, chars[pos]);
            pos += 1;
            if let Some(next) = node {
                let entries = &self.nodes[next as usize].entries;
                if !entries.is_empty() {
                    return Some((pos, entries.as_slice()));
                }
            }
        })
    }

    /// Number of distinct stems.
    pub fn len(&self) -> usize {
        self.stems
    }

    pub fn is_empty(&self) -> bool {
        self.stems == 0
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.nodes.iter().flat_map(|n| n.entries.iter())
    }
}
