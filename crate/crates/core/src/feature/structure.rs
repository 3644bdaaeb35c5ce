use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::FeatureError;

pub type ValueSet = BTreeSet<String>;

/// Attribute to non-empty value set; a value set reads as a disjunction.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureStructure {
    attrs: BTreeMap<String, ValueSet>,
}

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert<I, S>(&mut self, attr: impl Into<String>, values: I) -> Result<(), FeatureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let attr = attr.into();
        let set: ValueSet = values.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(FeatureError::EmptyValueSet(attr));
        }
        self.attrs.insert(attr, set);
        Ok(())
    }

    pub fn with<I, S>(mut self, attr: &str, values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.insert(attr, values).expect("non-empty value set");
        self
    }

    pub fn get(&self, attr: &str) -> Option<&ValueSet> {
        self.attrs.get(attr)
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ValueSet)> {
        self.attrs.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses `attr=v1|v2,attr2=v3`. The empty string is the empty structure.
    pub fn parse(src: &str) -> Result<Self, FeatureError> {
        let mut fs = FeatureStructure::new();
        for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let Some((attr, values)) = part.split_once('=') else {
                return Err(FeatureError::Syntax {
                    line: 0,
                    message: format!("expected `attr=value` in `{part}`"),
                });
            };
            let values: Vec<&str> = values.split('|').map(str::trim).filter(|v| !v.is_empty()).collect();
            fs.insert(attr.trim(), values)?;
        }
        Ok(fs)
    }

    /// True iff every attribute of `self` appears in `other` with a value
    /// set contained in this one.
    pub fn subsumes(&self, other: &FeatureStructure) -> bool {
        self.attrs
            .iter()
            .all(|(k, v)| other.attrs.get(k).is_some_and(|o| o.is_subset(v)))
    }

    pub fn unify(&self, other: &FeatureStructure) -> Option<FeatureStructure> {
        let mut attrs = self.attrs.clone();
        for (k, v) in &other.attrs {
            match attrs.get_mut(k) {
                Some(mine) => {
                    let meet: ValueSet = mine.intersection(v).cloned().collect();
                    if meet.is_empty() {
                        return None;
                    }
                    *mine = meet;
                }
                None => {
                    attrs.insert(k.clone(), v.clone());
                }
            }
        }
        Some(FeatureStructure { attrs })
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.attrs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}=")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    f.write_str("|")?;
                }
                f.write_str(x)?;
            }
        }
        Ok(())
    }
}

/// Attribute-wise unification; `None` on any empty intersection.
pub fn unify(a: &FeatureStructure, b: &FeatureStructure) -> Option<FeatureStructure> {
    a.unify(b)
}
