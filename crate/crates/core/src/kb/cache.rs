use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::item::TextItem;

/// A cached item with the stage that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CachedItem {
    pub id: usize,
    pub stage: String,
    #[serde(flatten)]
    pub item: TextItem,
}

/// Append-only per-document store. Competing and overlapping items are all
/// kept; exact duplicates are stored once.
#[derive(Debug, Clone, Default)]
pub struct ItemCache {
    items: Vec<CachedItem>,
    seen: HashSet<TextItem>,
    by_start: BTreeMap<(usize, String), Vec<usize>>,
}

impl ItemCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `item`; returns its id, or `None` if it was already present.
    pub fn put(&mut self, item: TextItem, stage: &str) -> Option<usize> {
        if !self.seen.insert(item.clone()) {
            return None;
        }
        let id = self.items.len();
        self.by_start.entry((item.start, item.ty.clone())).or_default().push(id);
        self.items.push(CachedItem {
            id,
            stage: stage.to_string(),
            item,
        });
        Some(id)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// All entries in insertion order.
    pub fn entries(&self) -> &[CachedItem] {
        &self.items
    }

    pub fn get(&self, id: usize) -> Option<&CachedItem> {
        self.items.get(id)
    }

    pub fn id_of(&self, item: &TextItem) -> Option<usize> {
        self.by_start
            .get(&(item.start, item.ty.clone()))?
            .iter()
            .copied()
            .find(|&i| self.items[i].item == *item)
    }

    /// Items whose type is in `types` (all types if `None`) lying inside
    /// `within`, ordered by start, longer first, then insertion.
    pub fn query(&self, types: Option<&BTreeSet<String>>, within: Option<(usize, usize)>) -> Vec<&TextItem> {
        let mut ids: Vec<usize> = self
            .by_start
            .iter()
            .filter(|((start, ty), _)| {
                types.is_none_or(|t| t.contains(ty)) && within.is_none_or(|(s, _)| *start >= s)
            })
            .flat_map(|(_, ids)| ids.iter().copied())
            .filter(|&i| within.is_none_or(|(_, e)| self.items[i].item.end <= e))
            .collect();
        ids.sort_by_key(|&i| (self.items[i].item.start, std::cmp::Reverse(self.items[i].item.end), i));
        ids.into_iter().map(|i| &self.items[i].item).collect()
    }

    pub fn items(&self) -> impl Iterator<Item = &TextItem> {
        self.items.iter().map(|c| &c.item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avs::AttrValue;

    fn item(ty: &str, s: usize, e: usize) -> TextItem {
        TextItem::new(ty, s, e, AttrValue::new())
    }

    #[test]
    fn put_and_query_in_order() {
        let mut c = ItemCache::new();
        c.put(item("pp", 4, 8), "b");
        c.put(item("np", 0, 2), "a");
        c.put(item("np", 0, 3), "a");
        assert_eq!(c.put(item("np", 0, 2), "a"), None);
        let all: Vec<(usize, usize)> = c.query(None, None).iter().map(|i| (i.start, i.end)).collect();
        assert_eq!(all, vec![(0, 3), (0, 2), (4, 8)]);
        let nps = c.query(Some(&BTreeSet::from(["np".to_string()])), None);
        assert_eq!(nps.len(), 2);
        assert_eq!(c.query(None, Some((0, 2))).len(), 1);
        assert_eq!(c.id_of(&item("pp", 4, 8)), Some(0));
        assert_eq!(c.get(1).unwrap().stage, "a");
    }
}
