use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::avs::AttrValue;
use crate::feature::AliasTable;
use crate::fst::{BasicEdge, BindingEnv, Bound, EdgeTest, Match, OutputDesc, Stream};
use crate::item::TextItem;

use super::{Entry, EntryKind, Fcp, ItemStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn stops(e: &Entry, markers: &BTreeSet<String>) -> bool {
    matches!(e.kind, EntryKind::Anchor(_)) || e.marker().is_some_and(|m| markers.contains(m))
}

/// Entry indices visible from the anchor on one side, nearest first.
/// Fragments overlapping the anchor are skipped; among entries competing
/// for the same position the longest wins. The walk ends before the first
/// stop marker.
pub fn view(stream: &ItemStream, anchor: usize, side: Side, stop_markers: &BTreeSet<String>) -> Vec<usize> {
    let entries = stream.entries();
    let Some(a) = entries.get(anchor) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    match side {
        Side::Right => {
            let mut cursor = a.end;
            loop {
                let next = entries
                    .iter()
                    .enumerate()
                    .filter(|(i, e)| *i != anchor && e.start >= cursor)
                    .min_by_key(|(i, e)| (e.start, Reverse(e.end), *i));
                match next {
                    Some((i, e)) if !stops(e, stop_markers) => {
                        out.push(i);
                        cursor = e.end;
                    }
                    _ => break,
                }
            }
        }
        Side::Left => {
            let mut cursor = a.start;
            loop {
                let next = entries
                    .iter()
                    .enumerate()
                    .filter(|(i, e)| *i != anchor && e.end <= cursor)
                    .min_by_key(|(i, e)| (Reverse(e.end), e.start, *i));
                match next {
                    Some((i, e)) if !stops(e, stop_markers) => {
                        out.push(i);
                        cursor = e.start;
                    }
                    _ => break,
                }
            }
        }
    }
    out
}

/// One side of the stream seen by an FCP expression.
struct ViewStream<'a> {
    stream: &'a ItemStream,
    view: Vec<usize>,
    fcp: &'a Fcp,
    aliases: &'a AliasTable,
}

impl ViewStream<'_> {
    fn agrees(&self, set: &str, slot: &str, item: &TextItem) -> bool {
        let Some((_, required)) = self.fcp.entry(set, slot).and_then(|e| e.agr.as_ref()) else {
            return true;
        };
        match item.out.get_str("agr") {
            None => true,
            Some(agr) => !self.aliases.resolve(agr).is_disjoint(required),
        }
    }
}

impl Stream for ViewStream<'_> {
    fn len(&self) -> usize {
        self.view.len()
    }

    fn step(&self, edge: &BasicEdge, pos: usize, env: &BindingEnv, out: &mut Vec<(usize, BindingEnv)>) {
        let Some(entry) = self.view.get(pos).and_then(|&i| self.stream.get(i)) else {
            return;
        };
        let value = match entry.as_fragment() {
            Some(item) => Bound::Item(item.clone()),
            None => Bound::At {
                index: entry.start,
                pos: None,
            },
        };
        let bind = |env: &BindingEnv| {
            let mut e = env.clone();
            if let Some(v) = &edge.var {
                e.push(v, value.clone());
            }
            e
        };
        match &edge.test {
            EdgeTest::Var => out.push((pos + 1, bind(env))),
            EdgeTest::IgnoreToken { surfaces } | EdgeTest::Token { surfaces } => {
                if entry.marker().is_some_and(|m| surfaces.iter().any(|s| s == m)) {
                    out.push((pos + 1, bind(env)));
                }
            }
            EdgeTest::IgnoreFragment { types } | EdgeTest::Fragment { types } => {
                if entry.as_fragment().is_some_and(|f| types.contains(&f.ty)) {
                    out.push((pos + 1, bind(env)));
                }
            }
            EdgeTest::AddNec { types, slot, set } | EdgeTest::AddOpt { types, slot, set } => {
                let Some(item) = entry.as_fragment() else { return };
                let Some(c) = self.fcp.entry(set, slot) else { return };
                if !types.contains(&item.ty) || env.fill(set, slot) >= c.max || !self.agrees(set, slot, item) {
                    return;
                }
                let mut e = bind(env);
                e.fills.entry((set.clone(), slot.clone())).or_default().push(item.clone());
                out.push((pos + 1, e));
            }
            _ => {}
        }
    }

    fn build(&self, desc: &OutputDesc, start: usize, end: usize, _env: &BindingEnv) -> TextItem {
        TextItem::new(desc.ty.clone(), start, end, AttrValue::new())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateAnchor {
    pub lexeme: String,
    /// Token index of the anchor.
    pub position: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub passive: bool,
}

/// Complete, necessary fragments, unused optional capacity (reversed).
pub type Score = (bool, usize, Reverse<usize>);

/// An instantiated frame: the anchor plus the fragments collected for
/// each constraint slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Template {
    #[serde(rename = "type")]
    pub ty: String,
    pub fcp: String,
    pub anchor: TemplateAnchor,
    pub slots: BTreeMap<String, Vec<TextItem>>,
    pub complete: bool,
    pub span: (usize, usize),
    #[serde(skip)]
    score: Score,
}

impl Template {
    /// Preference key, larger is better: complete, then more necessary
    /// fragments, then less unused optional capacity.
    pub fn score(&self) -> Score {
        self.score
    }

    pub fn items(&self) -> impl Iterator<Item = &TextItem> {
        self.slots.values().flatten()
    }
}

fn evaluate(fcp: &Fcp, env: &BindingEnv) -> Score {
    let mut complete = true;
    let mut nec = 0;
    let mut unused = 0;
    for set in &fcp.sets {
        for e in &set.entries {
            let n = env.fill(&set.name, &e.slot);
            if set.necessary {
                complete &= e.min <= n && n <= e.max;
                nec += n;
            } else {
                unused += e.max.saturating_sub(n);
            }
        }
    }
    (complete, nec, Reverse(unused))
}

/// Applies `fcp` around the anchor entry at `anchor`. The left expression
/// runs first; its bindings and slot fills seed the right expression, so
/// bounds are shared between both sides. Among all complete walks the
/// best-scoring one is returned; a walk that misses a necessary minimum
/// yields a template with `complete == false`.
pub fn apply_fcp(stream: &ItemStream, anchor: usize, fcp: &Fcp, aliases: &AliasTable) -> Option<Template> {
    let a = stream.get(anchor)?.as_anchor()?;
    let side = |s: Side| ViewStream {
        stream,
        view: view(stream, anchor, s, &fcp.stop_markers),
        fcp,
        aliases,
    };
    let left = side(Side::Left);
    let right = side(Side::Right);
    let mut seed = BindingEnv::new();
    if let Some(v) = &fcp.anchor_var {
        seed.push(v, Bound::Pos(a.token));
    }
    let mut best: Option<(Score, BindingEnv)> = None;
    for Match { env: lenv, .. } in fcp.left.run_seeded(&left, 0, &seed) {
        for Match { env, .. } in fcp.right.run_seeded(&right, 0, &lenv) {
            let score = evaluate(fcp, &env);
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, env));
            }
        }
    }
    let (score, env) = best.unwrap_or_else(|| (evaluate(fcp, &seed), seed));
    let mut slots: BTreeMap<String, Vec<TextItem>> = BTreeMap::new();
    for ((_, slot), items) in env.fills {
        slots.entry(slot).or_default().extend(items);
    }
    let entry = stream.get(anchor)?;
    let (mut start, mut end) = (entry.start, entry.end);
    for items in slots.values_mut() {
        items.sort_by_key(|i| (i.start, Reverse(i.end)));
        for i in items.iter() {
            start = start.min(i.start);
            end = end.max(i.end);
        }
    }
    Some(Template {
        ty: fcp.output.ty.clone(),
        fcp: fcp.name.clone(),
        anchor: TemplateAnchor {
            lexeme: a.lexeme.clone(),
            position: a.token,
            aux: a.aux.clone(),
            passive: a.passive,
        },
        slots,
        complete: score.0,
        span: (start, end),
        score,
    })
}

/// Applies every FCP attached to each anchor and keeps the preferred
/// template per anchor; earlier FCPs win ties. Anchors are independent and
/// processed in parallel; output follows anchor order.
pub fn combine(stream: &ItemStream, fcps: &BTreeMap<String, Fcp>, aliases: &AliasTable) -> Vec<Template> {
    use rayon::prelude::*;
    let anchors: Vec<(usize, &super::Anchor)> = stream.anchors().collect();
    anchors
        .par_iter()
        .filter_map(|(i, a)| {
            let mut best: Option<Template> = None;
            for name in &a.fcps {
                let Some(fcp) = fcps.get(name) else { continue };
                let passive;
                let fcp = if a.passive {
                    passive = fcp.passive();
                    &passive
                } else {
                    fcp
                };
                if let Some(t) = apply_fcp(stream, *i, fcp, aliases) {
                    if best.as_ref().is_none_or(|b| t.score() > b.score()) {
                        best = Some(t);
                    }
                }
            }
            best
        })
        .collect()
}
