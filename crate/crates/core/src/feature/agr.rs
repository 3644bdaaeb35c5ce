use std::collections::{BTreeMap, BTreeSet};

use super::{FeatureError, FeatureStructure, ValueSet};

/// Named value sets such as `gen-val` or `nom-acc-val`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    aliases: BTreeMap<String, ValueSet>,
}

impl AliasTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `alias<TAB>value,value,...` lines.
    pub fn parse(src: &str) -> Result<Self, FeatureError> {
        let mut table = AliasTable::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((alias, values)) = line.split_once('\t') else {
                return Err(FeatureError::Syntax {
                    line: n + 1,
                    message: "expected `alias<TAB>value,...`".into(),
                });
            };
            let set: ValueSet = values
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(String::from)
                .collect();
            if set.is_empty() {
                return Err(FeatureError::EmptyValueSet(alias.to_string()));
            }
            table.aliases.insert(alias.trim().to_string(), set);
        }
        Ok(table)
    }

    pub fn insert(&mut self, alias: &str, values: &[&str]) {
        self.aliases
            .insert(alias.to_string(), values.iter().map(|v| v.to_string()).collect());
    }

    pub fn get(&self, alias: &str) -> Option<&ValueSet> {
        self.aliases.get(alias)
    }

    /// Resolves an alias, a `v1|v2` disjunction, or a single value.
    pub fn resolve(&self, name: &str) -> ValueSet {
        if let Some(set) = self.aliases.get(name) {
            return set.clone();
        }
        name.split('|')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(String::from)
            .collect()
    }

    /// Renders a value set back to its alias when one matches exactly.
    pub fn render(&self, set: &ValueSet) -> String {
        self.aliases
            .iter()
            .find(|(_, v)| *v == set)
            .map(|(k, _)| k.clone())
            .unwrap_or_else(|| set.iter().cloned().collect::<Vec<_>>().join("|"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgrSlot {
    pub attr: String,
    pub var: u32,
    pub required: Option<ValueSet>,
}

/// `[(num %1)(case %2 = gen-val)(gender %3)]`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgrConstraint {
    pub slots: Vec<AgrSlot>,
}

impl AgrConstraint {
    pub fn parse(src: &str, aliases: &AliasTable) -> Result<Self, FeatureError> {
        let err = |message: String| FeatureError::Syntax { line: 0, message };
        let body = src
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| err(format!("constraint `{src}` must be enclosed in [...]")))?;
        let mut slots = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| err(format!("expected `(` in `{rest}`")))?;
            let close = inner.find(')').ok_or_else(|| err("unclosed slot".into()))?;
            let slot = &inner[..close];
            rest = inner[close + 1..].trim_start();

            let (lhs, required) = match slot.split_once('=') {
                Some((l, r)) => {
                    let set = aliases.resolve(r.trim());
                    if set.is_empty() {
                        return Err(FeatureError::EmptyValueSet(l.trim().to_string()));
                    }
                    (l, Some(set))
                }
                None => (slot, None),
            };
            let mut words = lhs.split_whitespace();
            let (Some(attr), Some(var), None) = (words.next(), words.next(), words.next()) else {
                return Err(err(format!("expected `attr %n` in `{slot}`")));
            };
            let var: u32 = var
                .strip_prefix('%')
                .and_then(|v| v.parse().ok())
                .filter(|&v| v > 0)
                .ok_or_else(|| err(format!("bad variable `{var}`")))?;
            slots.push(AgrSlot {
                attr: attr.to_string(),
                var,
                required,
            });
        }
        Ok(AgrConstraint { slots })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgrBinding {
    pub attr: String,
    pub values: ValueSet,
}

/// Variable id to its current (narrowed) value set.
pub type AgrEnv = BTreeMap<u32, AgrBinding>;

/// Checks `fs` against `constraint` under `env`, returning the narrowed
/// environment or `None` on a clash. Attributes absent from `fs` do not
/// constrain their slot.
pub fn apply_agr(constraint: &AgrConstraint, fs: &FeatureStructure, env: &AgrEnv) -> Option<AgrEnv> {
    let mut out = env.clone();
    for slot in &constraint.slots {
        let mut current: Option<BTreeSet<String>> = fs.get(&slot.attr).cloned();
        for extra in [slot.required.as_ref(), out.get(&slot.var).map(|b| &b.values)]
            .into_iter()
            .flatten()
        {
            current = Some(match current {
                Some(c) => c.intersection(extra).cloned().collect(),
                None => extra.clone(),
            });
        }
        match current {
            Some(values) if values.is_empty() => return None,
            Some(values) => {
                out.insert(
                    slot.var,
                    AgrBinding {
                        attr: slot.attr.clone(),
                        values,
                    },
                );
            }
            None => {}
        }
    }
    Some(out)
}
