use std::collections::BTreeMap;

use crate::feature::AgrEnv;
use crate::item::TextItem;
use crate::morphology::Pos;

/// A value pushed onto a variable stack.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    /// The stream element at this index, with the part of speech the edge
    /// tested for (if any).
    At { index: usize, pos: Option<Pos> },
    /// A position recorded by `:current-pos`.
    Pos(usize),
    /// The output of a sub-grammar or a consumed fragment.
    Item(TextItem),
}

/// Variable stacks, agreement environments and constraint-slot fill counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BindingEnv {
    pub vars: BTreeMap<String, Vec<Bound>>,
    pub agr: BTreeMap<String, AgrEnv>,
    /// `(set, slot)` to the entries collected for it so far.
    pub fills: BTreeMap<(String, String), Vec<TextItem>>,
}

impl BindingEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, var: &str, value: Bound) {
        self.vars.entry(var.to_string()).or_default().push(value);
    }

    pub fn get(&self, var: &str) -> &[Bound] {
        self.vars.get(var).map_or(&[], Vec::as_slice)
    }

    pub fn fill(&self, set: &str, slot: &str) -> usize {
        self.fills.get(&(set.to_string(), slot.to_string())).map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Match {
    pub start: usize,
    pub end: usize,
    pub env: BindingEnv,
}
